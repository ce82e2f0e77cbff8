#include "sscov_app/experiments.hpp"

#include "sscov_app/csv.hpp"

#include "sscov/applications.hpp"
#include "sscov/parallel.hpp"
#include "sscov/spatial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

namespace sscov::app {

const ResultRow* ResultTable::find(const std::string& method, const std::string& metric, Index p) const {
    for (const auto& r : rows)
        if (r.method == method && r.metric == metric && r.p == p) return &r;
    return nullptr;
}

std::string format_table_csv(const ResultTable& table) {
    std::string out = "method,metric,p,mean,sd,excluded\n";
    for (const auto& r : table.rows) {
        out += r.method + "," + r.metric + "," + std::to_string(r.p) + "," + format_double(r.mean) + "," +
               format_double(r.sd) + "," + std::to_string(r.excluded) + "\n";
    }
    return out;
}

std::pair<double, double> mean_sd(const std::vector<double>& values) {
    if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

struct Draw {
    PrecisionModel model;
    CholeskyFactor chol;
};

Draw draw_model(const ExperimentConfig& cfg, Index p, Rng& rng) {
    auto model = generate_model(cfg.model.spec(), p, rng);
    auto chol = cholesky(model.sigma);
    if (!chol) throw std::runtime_error("generated covariance is not positive definite");
    return Draw{std::move(model), std::move(*chol)};
}

Dataset draw_sample(const ExperimentConfig& cfg, const Draw& d, Rng& rng) {
    auto x = sample_elliptical(cfg.law.law(), Vector::Zero(d.model.dim()), d.chol, cfg.n, rng);
    if (cfg.contamination && cfg.contamination->r > 0.0) {
        x = contaminate(x, cfg.contamination->r, cfg.contamination->a, rng);
    }
    return x;
}

// Per replication and method, either the metric values or a failure.
using Outcome = std::optional<std::vector<double>>;

void aggregate(ResultTable& table, const ExperimentConfig& cfg, Index p,
               const std::vector<std::vector<Outcome>>& outcomes,
               const std::vector<std::string>& metrics) {
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        int excluded = 0;
        std::vector<std::vector<double>> per_metric(metrics.size());
        for (const auto& rep : outcomes) {
            if (!rep[m]) {
                ++excluded;
                continue;
            }
            for (std::size_t k = 0; k < metrics.size(); ++k) per_metric[k].push_back((*rep[m])[k]);
        }
        for (std::size_t k = 0; k < metrics.size(); ++k) {
            const auto [mean, sd] = mean_sd(per_metric[k]);
            table.rows.push_back(ResultRow{to_string(cfg.methods[m]), metrics[k], p, mean, sd, excluded});
        }
    }
}

}  // namespace

ResultTable run_precision_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid.grid();
    const std::vector<std::string> metrics{"frobenius", "matrix_l1", "operator"};
    ResultTable table;
    for (Index p : cfg.dims) {
        const auto reps = static_cast<std::size_t>(cfg.replications);
        std::vector<std::vector<Outcome>> outcomes(reps, std::vector<Outcome>(cfg.methods.size()));
        parallel_for(reps, cfg.threads, [&](std::size_t r) {
            Rng rng = Rng::stream(cfg.seed, r);
            const auto d = draw_model(cfg, p, rng);
            const auto train = draw_sample(cfg, d, rng);
            const auto valid = draw_sample(cfg, d, rng);
            const Matrix target =
                cfg.loss_target == LossTarget::Omega ? d.model.omega.matrix() : d.model.v0().matrix();
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                try {
                    const auto sel = select_lambda_validation(train, valid, cfg.methods[m], grid, cfg.solver);
                    const Matrix diff = sel.estimate.matrix.matrix() - target;
                    outcomes[r][m] = std::vector<double>{norm_frobenius(diff), norm_matrix_l1(diff),
                                                         norm_operator(diff)};
                } catch (const std::exception&) {
                    outcomes[r][m].reset();
                }
            }
        });
        aggregate(table, cfg, p, outcomes, metrics);
    }
    return table;
}

double roc_auc(const std::vector<double>& fpr, const std::vector<double>& tpr) {
    if (fpr.size() != tpr.size()) throw std::invalid_argument("roc_auc: length mismatch");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(fpr.size() + 2);
    pts.emplace_back(0.0, 0.0);
    for (std::size_t i = 0; i < fpr.size(); ++i) pts.emplace_back(fpr[i], tpr[i]);
    pts.emplace_back(1.0, 1.0);
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].first - pts[i - 1].first) * 0.5 * (pts[i].second + pts[i - 1].second);
    }
    return area;
}

RocResult run_graph_roc_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid.grid();
    const Index p = cfg.dims.front();
    const auto reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t k = grid.values.size();
    const std::size_t nm = cfg.methods.size();

    // per replication and method: the raw path, or nothing on failure
    std::vector<std::vector<std::optional<std::vector<RocPoint>>>> paths(
        reps, std::vector<std::optional<std::vector<RocPoint>>>(nm));
    parallel_for(reps, cfg.threads, [&](std::size_t r) {
        Rng rng = Rng::stream(cfg.seed, r);
        const auto d = draw_model(cfg, p, rng);
        const auto train = draw_sample(cfg, d, rng);
        for (std::size_t m = 0; m < nm; ++m) {
            try {
                paths[r][m] = roc_path(train, d.model, cfg.methods[m], grid, cfg.roc_tau, cfg.solver);
            } catch (const std::exception&) {
                paths[r][m].reset();
            }
        }
    });

    RocResult result;
    std::vector<std::vector<Outcome>> auc(reps, std::vector<Outcome>(nm));
    for (std::size_t m = 0; m < nm; ++m) {
        RocCurve curve;
        curve.method = to_string(cfg.methods[m]);
        for (std::size_t g = 0; g < k; ++g) {
            double fs = 0.0;
            double ts = 0.0;
            int fc = 0;
            int tc = 0;
            for (std::size_t r = 0; r < reps; ++r) {
                if (!paths[r][m]) continue;
                const auto& pt = (*paths[r][m])[g];
                if (pt.fpr) {
                    fs += *pt.fpr;
                    ++fc;
                }
                if (pt.tpr) {
                    ts += *pt.tpr;
                    ++tc;
                }
            }
            if (fc == 0 || tc == 0) continue;
            curve.lambda.push_back(grid.values[g]);
            curve.fpr.push_back(fs / fc);
            curve.tpr.push_back(ts / tc);
        }
        for (std::size_t r = 0; r < reps; ++r) {
            if (!paths[r][m]) continue;
            std::vector<double> f;
            std::vector<double> t;
            for (const auto& pt : *paths[r][m]) {
                if (pt.fpr && pt.tpr) {
                    f.push_back(*pt.fpr);
                    t.push_back(*pt.tpr);
                }
            }
            if (!f.empty()) auc[r][m] = std::vector<double>{roc_auc(f, t)};
        }
        result.curves.push_back(std::move(curve));
    }
    aggregate(result.auc, cfg, p, auc, {"auc"});
    return result;
}

std::string format_roc_csv(const std::vector<RocCurve>& curves) {
    std::string out = "method,lambda,fpr,tpr\n";
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.lambda.size(); ++i)
            out += c.method + "," + format_double(c.lambda[i]) + "," + format_double(c.fpr[i]) + "," +
                   format_double(c.tpr[i]) + "\n";
    return out;
}

std::string render_roc_svg(const std::vector<RocCurve>& curves, const std::string& title) {
    constexpr double w = 480.0;
    constexpr double h = 420.0;
    constexpr double left = 60.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 50.0;
    const double pw = w - left - right;
    const double ph = h - top - bottom;
    static const std::array<const char*, 6> colors{"#1b6ca8", "#d1495b", "#2e8b57", "#edae49", "#6a4c93",
                                                   "#444444"};
    auto x_of = [&](double f) { return left + f * pw; };
    auto y_of = [&](double t) { return top + (1.0 - t) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        s << "<text x=\"" << num(x_of(v)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
          << num(v) << "</text>\n";
        s << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y_of(v) + 4) << "\" text-anchor=\"end\">"
          << num(v) << "</text>\n";
    }
    s << "<line x1=\"" << x_of(0) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(1) << "\" y2=\"" << y_of(1)
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
    s << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 12)
      << "\" text-anchor=\"middle\">false positive rate</text>\n";
    s << "<text transform=\"translate(16," << num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">true positive rate</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cv = curves[c];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < cv.fpr.size(); ++i) pts.emplace_back(cv.fpr[i], cv.tpr[i]);
        std::sort(pts.begin(), pts.end());
        const char* color = colors[c % colors.size()];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [f, t] : pts) s << num(x_of(f)) << "," << num(y_of(t)) << " ";
        s << "\"/>\n";
        const double ly = top + 16.0 + 16.0 * static_cast<double>(c);
        s << "<line x1=\"" << num(left + pw - 110) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw - 90)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << num(left + pw - 84) << "\" y=\"" << num(ly + 4) << "\">" << cv.method
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

ResultTable run_lda_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid.grid();
    const std::vector<std::string> metrics{"specificity", "sensitivity", "mcc", "misclassification"};
    ResultTable table;
    for (Index p : cfg.dims) {
        const auto reps = static_cast<std::size_t>(cfg.replications);
        std::vector<std::vector<Outcome>> outcomes(reps, std::vector<Outcome>(cfg.methods.size()));
        parallel_for(reps, cfg.threads, [&](std::size_t r) {
            Rng rng = Rng::stream(cfg.seed, r);
            const auto model = generate_model(cfg.model.spec(), p, rng);
            const auto law = cfg.law.law();
            auto draw = [&](bool contaminated) {
                auto d = gen_lda_data(model, law, cfg.n, cfg.lda.p1, cfg.lda.s, cfg.lda.a, rng);
                if (contaminated && cfg.contamination && cfg.contamination->r > 0.0) {
                    d.data = contaminate(d.data, cfg.contamination->r, cfg.contamination->a, rng);
                }
                return d;
            };
            const auto train = draw(true);
            const auto valid = draw(true);
            const auto test = draw(false);
            const auto [d0, d1] = train.split();
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                try {
                    const auto rules = lda_fit_path(d0, d1, cfg.methods[m], grid, cfg.solver);
                    std::vector<double> rates;
                    rates.reserve(rules.size());
                    for (const auto& rule : rules) {
                        rates.push_back(misclassification_rate(valid.labels, lda_predict(rule, valid.data)));
                    }
                    const auto& best = rules[argmin_prefer_last(rates)];
                    const auto rep = classification_metrics(test.labels, lda_predict(best, test.data));
                    outcomes[r][m] =
                        std::vector<double>{rep.specificity, rep.sensitivity, rep.mcc, rep.misclassification};
                } catch (const std::exception&) {
                    outcomes[r][m].reset();
                }
            }
        });
        aggregate(table, cfg, p, outcomes, metrics);
    }
    return table;
}

namespace {

void log_table(const ResultTable& t, std::ostream& log) {
    for (const auto& r : t.rows) {
        log << "  " << r.method << " " << r.metric << " p=" << r.p << ": " << r.mean << " (" << r.sd << ")";
        if (r.excluded > 0) log << ", " << r.excluded << " excluded";
        log << "\n";
    }
}

}  // namespace

std::vector<std::string> run_and_write(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir(cfg.out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = (dir / name).string();
        write_text_file(path, text);
        written.push_back(path);
    };
    switch (cfg.experiment) {
        case Experiment::Precision: {
            const auto t = run_precision_experiment(cfg);
            log << "precision, " << model_name(cfg.model.spec()) << ", " << law_name(cfg.law.law()) << ", n="
                << cfg.n << ", " << cfg.replications << " replications\n";
            log_table(t, log);
            emit("precision_table.csv", format_table_csv(t));
            break;
        }
        case Experiment::GraphRoc: {
            const auto res = run_graph_roc_experiment(cfg);
            log << "graph_roc, " << law_name(cfg.law.law()) << ", n=" << cfg.n << ", p=" << cfg.dims.front()
                << ", " << cfg.replications << " replications\n";
            for (const auto& c : res.curves) {
                log << "  " << c.method << " AUC of averaged curve: " << roc_auc(c.fpr, c.tpr) << "\n";
            }
            log_table(res.auc, log);
            emit("roc.csv", format_roc_csv(res.curves));
            emit("roc_auc.csv", format_table_csv(res.auc));
            if (cfg.svg) {
                emit("roc.svg", render_roc_svg(res.curves, "ROC, " + law_name(cfg.law.law()) +
                                                               ", p = " + std::to_string(cfg.dims.front())));
            }
            break;
        }
        case Experiment::Lda: {
            const auto t = run_lda_experiment(cfg);
            log << "lda, " << model_name(cfg.model.spec()) << ", " << law_name(cfg.law.law()) << ", n="
                << cfg.n << ", " << cfg.replications << " replications\n";
            log_table(t, log);
            emit("lda_table.csv", format_table_csv(t));
            break;
        }
    }
    return written;
}

}  // namespace sscov::app
