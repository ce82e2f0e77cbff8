#include "sscov_app/config.hpp"

#include <toml.hpp>

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace sscov::app {

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::Precision: return "precision";
        case Experiment::GraphRoc: return "graph_roc";
        case Experiment::Lda: return "lda";
    }
    return "?";
}

Experiment parse_experiment(const std::string& name) {
    if (name == "precision") return Experiment::Precision;
    if (name == "graph_roc" || name == "graph-roc") return Experiment::GraphRoc;
    if (name == "lda") return Experiment::Lda;
    throw ConfigError("unknown experiment '" + name + "' (precision, graph_roc, lda)");
}

ModelSpec ModelParams::spec() const {
    if (kind == "model1") return ModelI{rho};
    if (kind == "model2") return ModelII{edge_prob, edge_val.value_or(0.5)};
    if (kind == "model3") return ModelIII{rho};
    if (kind == "geometric") return GeometricGraph{max_degree, edge_val.value_or(0.145), scale};
    throw ConfigError("model.kind: unknown model '" + kind + "' (model1, model2, model3, geometric)");
}

EllipticalLaw LawParams::law() const {
    if (kind == "normal") return NormalLaw{};
    if (kind == "t") return student_t(nu);
    if (kind == "mixture") return mixture_normal(weight_heavy, sigma_mult);
    throw ConfigError("law.kind: unknown law '" + kind + "' (normal, t, mixture)");
}

LambdaGrid GridParams::grid() const {
    if (count == 1) return lambda_grid(min);
    return lambda_grid(min, max, count, spacing);
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (replications < 1) fail("replications must be >= 1");
    if (n < 2) fail("n must be >= 2");
    if (dims.empty()) fail("p must list at least one dimension");
    for (Index p : dims)
        if (p < 2) fail("p: every dimension must be >= 2");
    if (methods.empty()) fail("methods must be nonempty");
    if (threads < 1) fail("threads must be >= 1");
    if (!(grid.min > 0.0)) fail("grid.min must be positive");
    if (grid.count < 1) fail("grid.count must be >= 1");
    if (grid.count > 1 && !(grid.max > grid.min)) fail("grid.max must exceed grid.min");
    if (!(model.rho > -1.0 && model.rho < 1.0)) fail("model.rho must lie in (-1, 1)");
    if (!(model.edge_prob >= 0.0 && model.edge_prob <= 1.0)) fail("model.edge_prob must lie in [0, 1]");
    if (model.max_degree < 0) fail("model.max_degree must be >= 0");
    if (!(model.scale > 0.0)) fail("model.scale must be positive");
    if (law.kind == "t" && !(law.nu > 2.0)) fail("law.nu must exceed 2 for a finite variance");
    if (!(law.weight_heavy >= 0.0 && law.weight_heavy <= 1.0)) fail("law.weight_heavy must lie in [0, 1]");
    if (!(law.sigma_mult > 0.0)) fail("law.sigma_mult must be positive");
    (void)model.spec();
    (void)law.law();
    if (contamination) {
        if (!(contamination->r >= 0.0 && contamination->r < 1.0)) fail("contamination.r must lie in [0, 1)");
    }
    if (!(lda.p1 > 0.0 && lda.p1 < 1.0)) fail("lda.p1 must lie in (0, 1)");
    if (experiment == Experiment::Lda) {
        for (Index p : dims)
            if (lda.s < 1 || lda.s > p) fail("lda.s must lie in [1, p]");
        if (model.kind != "model1" && model.kind != "model2") {
            fail("model.kind: the LDA experiment uses model1 or model2");
        }
    }
    if (experiment == Experiment::GraphRoc && dims.size() != 1) {
        fail("p: the graph_roc experiment takes a single dimension");
    }
    if (!(roc_tau >= 0.0)) fail("roc.tau must be >= 0");
    try {
        solver.validate();
    } catch (const std::invalid_argument& e) {
        fail(std::string("solver: ") + e.what());
    }
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::Precision: break;
        case Experiment::GraphRoc:
            c.model.kind = "geometric";
            c.n = 400;
            c.dims = {100};
            c.replications = 20;
            break;
        case Experiment::Lda:
            c.n = 200;
            break;
    }
    return c;
}

namespace {

[[noreturn]] void type_error(const std::string& key, const char* want) {
    throw ConfigError(key + ": expected " + want);
}

double as_double(const toml::node& v, const std::string& key) {
    if (auto d = v.value_exact<double>()) return *d;
    if (auto i = v.value_exact<std::int64_t>()) return static_cast<double>(*i);
    type_error(key, "a number");
}

std::int64_t as_int(const toml::node& v, const std::string& key) {
    if (auto i = v.value_exact<std::int64_t>()) return *i;
    type_error(key, "an integer");
}

std::string as_string(const toml::node& v, const std::string& key) {
    if (auto s = v.value_exact<std::string>()) return *s;
    type_error(key, "a string");
}

bool as_bool(const toml::node& v, const std::string& key) {
    if (auto b = v.value_exact<bool>()) return *b;
    type_error(key, "true or false");
}

int as_small_int(const toml::node& v, const std::string& key) {
    const auto i = as_int(v, key);
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        throw ConfigError(key + ": value out of range");
    }
    return static_cast<int>(i);
}

void set_key(ExperimentConfig& c, const std::string& key, const toml::node& v) {
    if (key == "experiment") c.experiment = parse_experiment(as_string(v, key));
    else if (key == "seed") {
        const auto s = as_int(v, key);
        if (s < 0) throw ConfigError("seed must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "threads") c.threads = as_small_int(v, key);
    else if (key == "replications") c.replications = as_small_int(v, key);
    else if (key == "n") c.n = as_int(v, key);
    else if (key == "p") {
        c.dims.clear();
        if (const auto* arr = v.as_array()) {
            for (const auto& e : *arr) c.dims.push_back(as_int(e, key));
        } else {
            c.dims.push_back(as_int(v, key));
        }
    } else if (key == "methods") {
        c.methods.clear();
        auto add = [&](const toml::node& e) {
            try {
                c.methods.push_back(parse_method(as_string(e, key)));
            } catch (const std::invalid_argument& ex) {
                throw ConfigError(std::string("methods: ") + ex.what());
            }
        };
        if (const auto* arr = v.as_array()) {
            for (const auto& e : *arr) add(e);
        } else {
            add(v);
        }
    } else if (key == "loss_target") {
        const auto s = as_string(v, key);
        if (s == "omega") c.loss_target = LossTarget::Omega;
        else if (s == "v0") c.loss_target = LossTarget::V0;
        else throw ConfigError("loss_target: expected omega or v0, got '" + s + "'");
    } else if (key == "model.kind") c.model.kind = as_string(v, key);
    else if (key == "model.rho") c.model.rho = as_double(v, key);
    else if (key == "model.edge_prob") c.model.edge_prob = as_double(v, key);
    else if (key == "model.edge_val") c.model.edge_val = as_double(v, key);
    else if (key == "model.max_degree") c.model.max_degree = as_small_int(v, key);
    else if (key == "model.scale") c.model.scale = as_double(v, key);
    else if (key == "law.kind") c.law.kind = as_string(v, key);
    else if (key == "law.nu") c.law.nu = as_double(v, key);
    else if (key == "law.weight_heavy") c.law.weight_heavy = as_double(v, key);
    else if (key == "law.sigma_mult") c.law.sigma_mult = as_double(v, key);
    else if (key == "grid.min") c.grid.min = as_double(v, key);
    else if (key == "grid.max") c.grid.max = as_double(v, key);
    else if (key == "grid.count") c.grid.count = as_small_int(v, key);
    else if (key == "grid.spacing") {
        const auto s = as_string(v, key);
        if (s == "log") c.grid.spacing = Spacing::Log;
        else if (s == "linear") c.grid.spacing = Spacing::Linear;
        else throw ConfigError("grid.spacing: expected log or linear, got '" + s + "'");
    } else if (key == "contamination.r") {
        if (!c.contamination) c.contamination = Contamination{};
        c.contamination->r = as_double(v, key);
    } else if (key == "contamination.a") {
        if (!c.contamination) c.contamination = Contamination{};
        c.contamination->a = as_double(v, key);
    } else if (key == "lda.p1") c.lda.p1 = as_double(v, key);
    else if (key == "lda.s") c.lda.s = as_int(v, key);
    else if (key == "lda.a") c.lda.a = as_double(v, key);
    else if (key == "roc.tau") c.roc_tau = as_double(v, key);
    else if (key == "solver.tol_primal") c.solver.tol_primal = as_double(v, key);
    else if (key == "solver.tol_dual") c.solver.tol_dual = as_double(v, key);
    else if (key == "solver.max_iter") c.solver.max_iter = as_small_int(v, key);
    else if (key == "solver.admm_step") c.solver.admm_step = as_double(v, key);
    else if (key == "solver.inner_tol") c.solver.inner_tol = as_double(v, key);
    else if (key == "output.dir") c.out_dir = as_string(v, key);
    else if (key == "output.svg") c.svg = as_bool(v, key);
    else throw ConfigError("unknown key '" + key + "'");
}

void apply_table(ExperimentConfig& c, const toml::table& t, const std::string& prefix) {
    for (const auto& [k, v] : t) {
        const std::string key = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
        if (const auto* sub = v.as_table()) {
            if (!prefix.empty()) throw ConfigError("unknown section '" + key + "'");
            apply_table(c, *sub, key);
        } else {
            set_key(c, key, v);
        }
    }
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, ExperimentConfig base,
                              const std::string& origin) {
    toml::table t;
    try {
        t = toml::parse(toml_text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
            << e.description();
        throw ConfigError(msg.str());
    }
    try {
        apply_table(base, t, "");
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base), path);
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty()) throw ConfigError("override '" + std::string(assignment) + "' has an empty key");
    toml::table holder;
    try {
        holder = toml::parse("v = " + value);
    } catch (const toml::parse_error&) {
        holder.insert_or_assign("v", value);
    }
    set_key(cfg, key, *holder.get("v"));
}

std::string dump_config(const ExperimentConfig& c) {
    toml::table t;
    t.insert("experiment", to_string(c.experiment));
    t.insert("seed", static_cast<std::int64_t>(c.seed));
    t.insert("threads", c.threads);
    t.insert("replications", c.replications);
    t.insert("n", static_cast<std::int64_t>(c.n));
    toml::array dims;
    for (Index p : c.dims) dims.push_back(static_cast<std::int64_t>(p));
    t.insert("p", dims);
    toml::array methods;
    for (Method m : c.methods) methods.push_back(sscov::to_string(m));
    t.insert("methods", methods);
    t.insert("loss_target", c.loss_target == LossTarget::Omega ? "omega" : "v0");

    toml::table model;
    model.insert("kind", c.model.kind);
    model.insert("rho", c.model.rho);
    model.insert("edge_prob", c.model.edge_prob);
    if (c.model.edge_val) model.insert("edge_val", *c.model.edge_val);
    model.insert("max_degree", c.model.max_degree);
    model.insert("scale", c.model.scale);
    t.insert("model", model);

    toml::table law;
    law.insert("kind", c.law.kind);
    law.insert("nu", c.law.nu);
    law.insert("weight_heavy", c.law.weight_heavy);
    law.insert("sigma_mult", c.law.sigma_mult);
    t.insert("law", law);

    toml::table grid;
    grid.insert("min", c.grid.min);
    grid.insert("max", c.grid.max);
    grid.insert("count", c.grid.count);
    grid.insert("spacing", c.grid.spacing == Spacing::Log ? "log" : "linear");
    t.insert("grid", grid);

    if (c.contamination) {
        toml::table cont;
        cont.insert("r", c.contamination->r);
        cont.insert("a", c.contamination->a);
        t.insert("contamination", cont);
    }
    toml::table lda;
    lda.insert("p1", c.lda.p1);
    lda.insert("s", static_cast<std::int64_t>(c.lda.s));
    lda.insert("a", c.lda.a);
    t.insert("lda", lda);

    toml::table roc;
    roc.insert("tau", c.roc_tau);
    t.insert("roc", roc);

    toml::table solver;
    solver.insert("tol_primal", c.solver.tol_primal);
    solver.insert("tol_dual", c.solver.tol_dual);
    solver.insert("max_iter", c.solver.max_iter);
    solver.insert("admm_step", c.solver.admm_step);
    solver.insert("inner_tol", c.solver.inner_tol);
    t.insert("solver", solver);

    toml::table output;
    output.insert("dir", c.out_dir);
    output.insert("svg", c.svg);
    t.insert("output", output);

    std::ostringstream ss;
    ss << t << "\n";
    return ss.str();
}

}  // namespace sscov::app
