#pragma once

// Experiment configuration: a TOML file plus `key=value` overrides.

#include "sscov/estimators.hpp"
#include "sscov/samplers.hpp"
#include "sscov/selection.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sscov::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { Precision, GraphRoc, Lda };
enum class LossTarget { Omega, V0 };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

struct ModelParams {
    std::string kind = "model1";  // model1 | model2 | model3 | geometric
    double rho = 0.6;
    double edge_prob = 0.1;
    /// Unset means the kind's default: 0.5 for model2, 0.145 for geometric.
    std::optional<double> edge_val;
    int max_degree = 4;
    double scale = 0.25;

    ModelSpec spec() const;
};

struct LawParams {
    std::string kind = "normal";  // normal | t | mixture
    double nu = 3.0;
    double weight_heavy = 0.2;
    double sigma_mult = 3.0;

    EllipticalLaw law() const;
};

struct GridParams {
    double min = 0.005;
    double max = 1.0;
    int count = 50;
    Spacing spacing = Spacing::Log;

    LambdaGrid grid() const;
};

struct Contamination {
    double r = 0.0;
    double a = 0.0;
};

struct LdaParams {
    double p1 = 0.5;
    Index s = 10;
    double a = 0.05;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Precision;
    ModelParams model;
    LawParams law;
    Index n = 100;
    std::vector<Index> dims{30};
    int replications = 100;
    GridParams grid;
    std::vector<Method> methods{Method::CLIME, Method::SCLIME, Method::GLASSO, Method::SGLASSO};
    std::uint64_t seed = 20240601;
    int threads = 1;
    std::optional<Contamination> contamination;
    LdaParams lda;
    double roc_tau = 1e-5;
    LossTarget loss_target = LossTarget::Omega;
    SolverConfig solver;
    std::string out_dir = ".";
    bool svg = false;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Defaults for each experiment: Model I, n = 100, p = 30 for
/// precision; geometric graph, n = 400, p = 100, 20 replications for ROC;
/// Model I, n = 200, p = 30 for LDA.
ExperimentConfig default_config(Experiment e);

/// Applies every key of a TOML document on top of `base`. Unknown keys are
/// errors. `origin` names the source in messages.
ExperimentConfig parse_config(std::string_view toml_text, ExperimentConfig base,
                              const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

/// `section.key=value`; the value is read as TOML, falling back to a bare
/// string.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// The documented keys with their current values, as a TOML document.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace sscov::app
