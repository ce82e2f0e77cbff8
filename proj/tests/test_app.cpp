#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "sscov_app/commands.hpp"
#include "sscov_app/config.hpp"
#include "sscov_app/csv.hpp"
#include "sscov_app/experiments.hpp"

#include "sscov/spatial.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sscov;
using namespace sscov::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sscov_test_app_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(SSCOV_CLI_PATH) + " " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_precision() {
    auto cfg = default_config(Experiment::Precision);
    cfg.n = 40;
    cfg.dims = {6};
    cfg.replications = 3;
    cfg.grid.count = 6;
    cfg.grid.min = 0.02;
    cfg.grid.max = 0.8;
    return cfg;
}

}  // namespace

TEST_CASE("defaults") {
    auto c = default_config(Experiment::Precision);
    CHECK(c.n == 100);
    CHECK(c.dims == std::vector<Index>{30});
    CHECK(c.replications == 100);
    CHECK(c.grid.count == 50);
    CHECK(c.grid.min == 0.005);
    CHECK(c.grid.max == 1.0);
    CHECK(c.loss_target == LossTarget::Omega);
    CHECK(std::holds_alternative<ModelI>(c.model.spec()));

    c = default_config(Experiment::GraphRoc);
    CHECK(c.n == 400);
    CHECK(c.dims == std::vector<Index>{100});
    CHECK(c.replications == 20);
    const auto g = std::get<GeometricGraph>(c.model.spec());
    CHECK(g.edge_val == 0.145);
    CHECK(g.max_degree == 4);
    CHECK(c.roc_tau == 1e-5);

    c = default_config(Experiment::Lda);
    CHECK(c.n == 200);
    CHECK(c.lda.a == 0.05);
    CHECK(c.lda.s == 10);
}

TEST_CASE("config parsing") {
    const auto c = parse_config(R"(
experiment = "precision"
seed = 7
n = 50
p = [30, 120]
methods = ["sclime", "GLASSO"]
loss_target = "v0"

[model]
kind = "model2"

[law]
kind = "t"
nu = 3

[grid]
min = 0.01
count = 10
spacing = "linear"

[contamination]
r = 0.005
a = 0.13

[solver]
max_iter = 200
)",
                                default_config(Experiment::Precision));
    CHECK(c.seed == 7);
    CHECK(c.n == 50);
    CHECK(c.dims == std::vector<Index>{30, 120});
    CHECK(c.methods == std::vector<Method>{Method::SCLIME, Method::GLASSO});
    CHECK(c.loss_target == LossTarget::V0);
    const auto m2 = std::get<ModelII>(c.model.spec());
    CHECK(m2.edge_val == 0.5);
    const auto t = std::get<StudentTLaw>(c.law.law());
    CHECK(t.nu == 3.0);
    CHECK(c.grid.grid().values.size() == 10);
    CHECK(c.grid.spacing == Spacing::Linear);
    REQUIRE(c.contamination);
    CHECK(c.contamination->r == 0.005);
    CHECK(c.solver.max_iter == 200);
    // untouched keys keep the base values
    CHECK(c.replications == 100);

    CHECK(parse_config("p = 12", {}).dims == std::vector<Index>{12});
}

TEST_CASE("config errors") {
    const auto base = default_config(Experiment::Precision);
    CHECK_THROWS_AS(parse_config("bogus = 1", base), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\ncolour = 1", base), ConfigError);
    CHECK_THROWS_AS(parse_config("n = \"many\"", base), ConfigError);
    CHECK_THROWS_AS(parse_config("n = [", base), ConfigError);
    CHECK_THROWS_AS(parse_config("methods = [\"lasso\"]", base), std::exception);
    auto bad = base;
    bad.replications = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = base;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = base;
    bad.n = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = base;
    bad.dims = {1};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    try {
        (void)parse_config("[grid]\nmnx = 2", base, "exp.toml");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("grid.mnx") != std::string::npos);
    }
}

TEST_CASE("overrides") {
    auto c = default_config(Experiment::Precision);
    apply_override(c, "law.kind=t");
    apply_override(c, "grid.count=7");
    apply_override(c, "p=[10,20]");
    apply_override(c, "model.rho = 0.3");
    CHECK(c.law.kind == "t");
    CHECK(c.grid.count == 7);
    CHECK(c.dims == std::vector<Index>{10, 20});
    CHECK(c.model.rho == 0.3);
    CHECK_THROWS_AS(apply_override(c, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "law.nope=1"), ConfigError);
}

TEST_CASE("dumped config parses back to itself") {
    auto c = default_config(Experiment::GraphRoc);
    c.contamination = Contamination{0.1, 10.0};
    c.methods = {Method::SGLASSO};
    const auto text = dump_config(c);
    const auto back = parse_config(text, default_config(Experiment::Precision));
    CHECK(dump_config(back) == text);
}

TEST_CASE("CSV round trip is exact") {
    Rng rng(1);
    Matrix m = testing::random_matrix(7, 5, rng);
    m(0, 0) = 1e-300;
    m(1, 1) = -123456789.123456789;
    m(2, 2) = 0.1;
    const auto text = format_csv_matrix(m, {"a", "b", "c", "d", "e"});
    const auto parsed = parse_csv_matrix(text);
    CHECK(parsed.header == std::vector<std::string>{"a", "b", "c", "d", "e"});
    CHECK(parsed.values == m);
    CHECK(format_csv_matrix(parsed.values, parsed.header) == text);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(parse_csv_matrix("1,2\n\n3,4\n").values.rows() == 2);
}

TEST_CASE("CSV errors cite row and column") {
    try {
        (void)parse_csv_matrix("1,2\n3,4\n5,abc\n", "data.csv");
        FAIL("expected an error");
    } catch (const CsvError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("data.csv") != std::string::npos);
        CHECK(msg.find("row 3, column 2") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv_matrix("1,2\n3\n"), CsvError);
    CHECK_THROWS_AS(parse_csv_matrix(""), CsvError);
}

TEST_CASE("mean and sample standard deviation") {
    const auto [m, s] = mean_sd({1.0, 2.0, 4.0});
    CHECK(m == doctest::Approx(7.0 / 3.0));
    // deviations -4/3, -1/3, 5/3: squares sum to 42/9, over R - 1 = 2
    CHECK(s == doctest::Approx(std::sqrt(42.0 / 18.0)));
    CHECK(mean_sd({5.0}).second == 0.0);
    CHECK(std::isnan(mean_sd({}).first));
}

TEST_CASE("precision experiment on three replications matches a hand computation") {
    const auto cfg = small_precision();
    const auto table = run_precision_experiment(cfg);
    CHECK(table.rows.size() == cfg.methods.size() * 3 * cfg.dims.size());

    // redo the replications by hand for one method and metric
    std::vector<double> fro;
    for (std::uint64_t r = 0; r < 3; ++r) {
        Rng rng = Rng::stream(cfg.seed, r);
        const auto model = gen_model1(6, 0.6);
        const auto chol = *cholesky(model.sigma);
        const auto train = sample_elliptical(NormalLaw{}, Vector::Zero(6), chol, cfg.n, rng);
        const auto valid = sample_elliptical(NormalLaw{}, Vector::Zero(6), chol, cfg.n, rng);
        const auto sel = select_lambda_validation(train, valid, Method::SCLIME, cfg.grid.grid(), cfg.solver);
        fro.push_back(norm_frobenius(sel.estimate.matrix.matrix() - model.omega.matrix()));
    }
    const double mean = (fro[0] + fro[1] + fro[2]) / 3.0;
    double ss = 0.0;
    for (double v : fro) ss += (v - mean) * (v - mean);
    const auto* row = table.find("SCLIME", "frobenius", 6);
    REQUIRE(row);
    CHECK(row->mean == doctest::Approx(mean).epsilon(1e-14));
    CHECK(row->sd == doctest::Approx(std::sqrt(ss / 2.0)).epsilon(1e-12));
    CHECK(row->excluded == 0);
    for (const auto& r : table.rows) CHECK(r.sd >= 0.0);

    auto one = cfg;
    one.replications = 1;
    for (const auto& r : run_precision_experiment(one).rows) CHECK(r.sd == 0.0);

    const auto csv = format_table_csv(table);
    CHECK(csv.rfind("method,metric,p,mean,sd,excluded\n", 0) == 0);
}

TEST_CASE("results do not depend on the thread count") {
    auto cfg = small_precision();
    cfg.replications = 4;
    const auto a = format_table_csv(run_precision_experiment(cfg));
    cfg.threads = 3;
    const auto b = format_table_csv(run_precision_experiment(cfg));
    CHECK(a == b);

    auto roc = default_config(Experiment::GraphRoc);
    roc.n = 60;
    roc.dims = {12};
    roc.replications = 3;
    roc.grid.count = 5;
    const auto r1 = run_graph_roc_experiment(roc);
    roc.threads = 2;
    const auto r2 = run_graph_roc_experiment(roc);
    CHECK(format_roc_csv(r1.curves) == format_roc_csv(r2.curves));
    CHECK(format_table_csv(r1.auc) == format_table_csv(r2.auc));
}

TEST_CASE("trapezoidal AUC") {
    CHECK(roc_auc({}, {}) == doctest::Approx(0.5));
    CHECK(roc_auc({0.0}, {1.0}) == doctest::Approx(1.0));
    CHECK(roc_auc({0.5}, {0.5}) == doctest::Approx(0.5));
    // (0,0) (0.2,0.6) (0.5,0.8) (1,1): 0.06 + 0.21 + 0.45
    CHECK(roc_auc({0.5, 0.2}, {0.8, 0.6}) == doctest::Approx(0.72));
    CHECK_THROWS_AS(roc_auc({0.1}, {}), std::invalid_argument);
}

TEST_CASE("graph ROC experiment shape") {
    auto cfg = default_config(Experiment::GraphRoc);
    cfg.n = 60;
    cfg.dims = {12};
    cfg.replications = 2;
    cfg.grid.count = 1;
    cfg.grid.min = 0.1;
    const auto res = run_graph_roc_experiment(cfg);
    REQUIRE(res.curves.size() == cfg.methods.size());
    for (const auto& c : res.curves) {
        CHECK(c.lambda.size() == 1);
        CHECK(c.lambda[0] == 0.1);
    }
    const auto csv = format_roc_csv(res.curves);
    CHECK(csv.rfind("method,lambda,fpr,tpr\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(cfg.methods.size()));
}

TEST_CASE("SVG output leaves the CSV untouched") {
    auto cfg = default_config(Experiment::GraphRoc);
    cfg.n = 60;
    cfg.dims = {12};
    cfg.replications = 2;
    cfg.grid.count = 4;
    const auto plain = scratch_dir("plain");
    const auto with_svg = scratch_dir("svg");
    std::ostringstream log;
    cfg.out_dir = plain.string();
    run_and_write(cfg, log);
    cfg.out_dir = with_svg.string();
    cfg.svg = true;
    const auto written = run_and_write(cfg, log);
    CHECK(written.size() == 3);
    CHECK(slurp(plain / "roc.csv") == slurp(with_svg / "roc.csv"));
    CHECK(slurp(plain / "roc_auc.csv") == slurp(with_svg / "roc_auc.csv"));
    CHECK_FALSE(fs::exists(plain / "roc.svg"));
    const auto svg = slurp(with_svg / "roc.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("LDA experiment shape") {
    auto cfg = default_config(Experiment::Lda);
    cfg.n = 60;
    cfg.dims = {8};
    cfg.replications = 2;
    cfg.grid.count = 4;
    cfg.lda.s = 3;
    cfg.lda.a = 1.0;
    const auto t = run_lda_experiment(cfg);
    CHECK(t.rows.size() == cfg.methods.size() * 4);
    for (const auto& r : t.rows) {
        CHECK(r.excluded == 0);
        if (r.metric != "mcc") {
            CHECK(r.mean >= 0.0);
            CHECK(r.mean <= 1.0);
        }
    }
}

TEST_CASE("estimate command on the signed unit vectors") {
    const auto dir = scratch_dir("estimate");
    write_text_file((dir / "toy.csv").string(), "x,y\n1,0\n-1,0\n0,1\n0,-1\n");
    EstimateRequest req;
    req.input = (dir / "toy.csv").string();
    req.method = Method::SGLASSO;
    req.lambda = 0.0;
    req.output = (dir / "v.csv").string();
    req.metadata = (dir / "v.json").string();
    const auto out = run_estimate(req);
    // p * SSCM = identity
    CHECK(testing::max_abs_diff(out.estimate.matrix.matrix(), Matrix::Identity(2, 2)) <= 1e-12);
    const auto back = read_csv_matrix(req.output);
    CHECK(back.values == out.estimate.matrix.matrix());
    const auto meta = nlohmann::json::parse(slurp(req.metadata));
    CHECK(meta["method"] == "SGLASSO");
    CHECK(meta["lambda"] == 0.0);
    CHECK(meta["n"] == 4);
    CHECK(meta["p"] == 2);
    CHECK(meta["is_pd"] == true);
    CHECK(meta["norms"]["frobenius"].get<double>() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("estimate command with validation selection") {
    const auto dir = scratch_dir("estimate_grid");
    Rng rng(3);
    const auto m = gen_model1(5, 0.5);
    write_text_file((dir / "train.csv").string(),
                    format_csv_matrix(sample_elliptical(NormalLaw{}, Vector::Zero(5), m.sigma, 80, rng)));
    write_text_file((dir / "valid.csv").string(),
                    format_csv_matrix(sample_elliptical(NormalLaw{}, Vector::Zero(5), m.sigma, 80, rng)));
    write_text_file((dir / "narrow.csv").string(), "1,2\n3,4\n5,7\n");
    EstimateRequest req;
    req.input = (dir / "train.csv").string();
    req.validation = (dir / "valid.csv").string();
    req.grid.count = 6;
    req.grid.min = 0.02;
    req.grid.max = 0.5;
    const auto out = estimate_from_files(req);
    CHECK(out.metadata["selection"].size() == 6);
    bool found = false;
    for (const auto& s : out.metadata["selection"]) found |= s["lambda"] == out.estimate.lambda;
    CHECK(found);

    req.validation = (dir / "narrow.csv").string();
    CHECK_THROWS(estimate_from_files(req));
}

TEST_CASE("contaminate command") {
    const auto dir = scratch_dir("contaminate");
    Rng rng(4);
    const Matrix x = testing::random_matrix(143, 3, rng);
    write_text_file((dir / "in.csv").string(), format_csv_matrix(x, {"a", "b", "c"}));
    ContaminateRequest req{(dir / "in.csv").string(), (dir / "out.csv").string(), 0.1, 10.0, 5};
    CHECK(run_contaminate(req) == 15);
    const auto y = read_csv_matrix(req.output);
    CHECK(y.header == std::vector<std::string>{"a", "b", "c"});
    for (Index j = 0; j < 3; ++j) CHECK((y.values.col(j).array() != x.col(j).array()).count() == 15);
}

TEST_CASE("command line") {
    const auto dir = scratch_dir("cli");
    const auto log = dir / "log.txt";
    write_text_file((dir / "toy.csv").string(), "1,0\n-1,0\n0,1\n0,-1\n");

    CHECK(run_cli("--help", log) == 0);
    CHECK(slurp(log).find("simulate") != std::string::npos);

    CHECK(run_cli("--out-dir " + dir.string() + " estimate --input " + (dir / "toy.csv").string() +
                      " --method sglasso --lambda 0",
                  log) == 0);
    CHECK(fs::exists(dir / "precision.csv"));
    CHECK(fs::exists(dir / "precision.json"));

    CHECK(run_cli("estimate --input " + (dir / "toy.csv").string(), log) == 1);
    CHECK(slurp(log).find("error:") != std::string::npos);

    write_text_file((dir / "bad.csv").string(), "1,2\n3,4\n5,abc\n");
    CHECK(run_cli("estimate --lambda 0.1 --input " + (dir / "bad.csv").string(), log) == 1);
    CHECK(slurp(log).find("row 3, column 2") != std::string::npos);

    CHECK(run_cli("simulate precision --dump-config --set n=77", log) == 0);
    CHECK(slurp(log).find("n = 77") != std::string::npos);

    const std::string common = "--out-dir " + dir.string() +
                               " simulate precision --set n=30 --set p=5 --set replications=2 --set grid.count=4";
    CHECK(run_cli("--seed 9 " + common, log) == 0);
    const auto first = slurp(dir / "precision_table.csv");
    CHECK(run_cli("--seed 9 --threads 2 " + common, log) == 0);
    CHECK(slurp(dir / "precision_table.csv") == first);

    write_text_file((dir / "lda.toml").string(), "experiment = \"lda\"\n");
    CHECK(run_cli("simulate precision --config " + (dir / "lda.toml").string(), log) == 1);

    CHECK(run_cli("--seed 3 contaminate --input " + (dir / "toy.csv").string() + " --output " +
                      (dir / "c.csv").string() + " --rate 0.25 --magnitude 5",
                  log) == 0);
    CHECK(slurp(log).find("replaced 1 entries per column") != std::string::npos);
}
