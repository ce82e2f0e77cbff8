#include "sscov_app/commands.hpp"
#include "sscov_app/config.hpp"
#include "sscov_app/csv.hpp"
#include "sscov_app/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace sscov;
using namespace sscov::app;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

struct SimulateArgs {
    std::string config;
    std::vector<std::string> overrides;
    bool svg = false;
    bool dump = false;
};

int simulate(Experiment e, const SimulateArgs& a, const Globals& g) {
    auto cfg = default_config(e);
    if (!a.config.empty()) cfg = load_config(a.config, cfg);
    if (cfg.experiment != e) {
        throw ConfigError("config sets experiment = " + to_string(cfg.experiment) + " but the command runs " +
                          to_string(e));
    }
    for (const auto& o : a.overrides) apply_override(cfg, o);
    if (g.seed) cfg.seed = *g.seed;
    if (g.threads) cfg.threads = *g.threads;
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (a.svg) cfg.svg = true;
    cfg.validate();
    if (a.dump) {
        std::cout << dump_config(cfg);
        return 0;
    }
    for (const auto& path : run_and_write(cfg, std::cout)) std::cout << "wrote " << path << "\n";
    return 0;
}

std::string under(const Globals& g, const std::string& path) {
    if (!g.out_dir || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(*g.out_dir) / path).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse precision matrices from spatial-sign covariance (SCLIME, SGLASSO) "
                 "and their classical baselines"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir;
    auto* seed_opt = app.add_option("--seed", seed, "Base seed; replication r uses seed + r");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads for replications")
                            ->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out-dir", out_dir, "Directory for output files");

    auto* sim = app.add_subcommand("simulate", "Run a simulation study");
    sim->require_subcommand(1);
    SimulateArgs sa;
    std::vector<std::pair<CLI::App*, Experiment>> experiments;
    for (auto [name, e, desc] :
         {std::tuple{"precision", Experiment::Precision, "Matrix losses of validation-tuned estimates"},
          std::tuple{"graph-roc", Experiment::GraphRoc, "Support-recovery ROC curves on a geometric graph"},
          std::tuple{"lda", Experiment::Lda, "Fisher discriminant classification metrics"}}) {
        auto* sub = sim->add_subcommand(name, desc);
        sub->add_option("--config", sa.config, "TOML experiment file")->check(CLI::ExistingFile);
        sub->add_option("--set", sa.overrides, "Override a config key: section.key=value");
        sub->add_flag("--svg", sa.svg, "Also write roc.svg (graph-roc)");
        sub->add_flag("--dump-config", sa.dump, "Print the effective configuration and exit");
        experiments.emplace_back(sub, e);
    }

    auto* est = app.add_subcommand("estimate", "Estimate a precision matrix from a CSV sample");
    EstimateRequest er;
    std::string method = "SCLIME";
    double lambda = 0.0;
    std::string spacing = "log";
    est->add_option("--input", er.input, "n x p sample, one observation per row")->required()
        ->check(CLI::ExistingFile);
    est->add_option("--method", method, "SCLIME, SGLASSO, CLIME or GLASSO")->capture_default_str();
    auto* lambda_opt = est->add_option("--lambda", lambda, "Single tuning parameter");
    auto* valid_opt = est->add_option("--validation", er.validation.emplace(),
                                      "Validation sample for grid selection")
                          ->check(CLI::ExistingFile);
    est->add_option("--grid-min", er.grid.min)->capture_default_str();
    est->add_option("--grid-max", er.grid.max)->capture_default_str();
    est->add_option("--grid-count", er.grid.count)->capture_default_str();
    est->add_option("--spacing", spacing, "log or linear")->capture_default_str();
    est->add_option("--output", er.output, "Estimated matrix (CSV)")->capture_default_str();
    est->add_option("--metadata", er.metadata, "Fit record (JSON)")->capture_default_str();
    est->add_option("--max-iter", er.solver.max_iter)->capture_default_str();
    lambda_opt->excludes(valid_opt);

    auto* con = app.add_subcommand("contaminate", "Replace ceil(n*r) entries per column by +-a");
    ContaminateRequest cr;
    con->add_option("--input", cr.input)->required()->check(CLI::ExistingFile);
    con->add_option("--output", cr.output)->required();
    con->add_option("--rate", cr.rate, "Fraction r in [0, 1)")->required();
    con->add_option("--magnitude", cr.magnitude, "Replacement magnitude a")->required();

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed;
    if (*threads_opt) g.threads = threads;
    if (*out_opt) g.out_dir = out_dir;

    try {
        for (auto& [sub, e] : experiments)
            if (sub->parsed()) return simulate(e, sa, g);

        if (est->parsed()) {
            er.method = parse_method(method);
            if (*lambda_opt) {
                er.lambda = lambda;
                er.validation.reset();
            } else if (!*valid_opt) {
                throw std::invalid_argument("estimate: give --lambda, or --validation with a grid");
            }
            if (spacing == "log") er.grid.spacing = Spacing::Log;
            else if (spacing == "linear") er.grid.spacing = Spacing::Linear;
            else throw std::invalid_argument("--spacing: expected log or linear");
            er.output = under(g, er.output);
            er.metadata = under(g, er.metadata);
            const auto out = run_estimate(er);
            std::cout << to_string(out.estimate.method) << " lambda=" << out.estimate.lambda
                      << " converged=" << out.estimate.converged << " is_pd=" << out.estimate.is_pd << "\n"
                      << "wrote " << er.output << "\nwrote " << er.metadata << "\n";
            return 0;
        }
        if (con->parsed()) {
            if (g.seed) cr.seed = *g.seed;
            cr.output = under(g, cr.output);
            const auto k = run_contaminate(cr);
            std::cout << "replaced " << k << " entries per column\nwrote " << cr.output << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
