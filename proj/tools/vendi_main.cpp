// SPDX-License-Identifier: Apache-2.0
//
// vendi: scoring, diversity sweeps, double-well Vendi sampling, Figure-style
// scenario tables, and metric correlation, over CSV/binary matrix files.
//
// Exit codes: 0 ok, 2 malformed input file, 3 indefinite kernel,
// 4 bad arguments, 5 simulation divergence, 6 constant column.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vendi/grad.hpp"
#include "vendi/kernels.hpp"
#include "vendi/matrix_io.hpp"
#include "vendi/sampler.hpp"
#include "vendi/scenarios.hpp"
#include "vendi/scores.hpp"
#include "vendi/spectrum.hpp"

namespace {

using json = nlohmann::json;

struct BadArgs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<vendi::Order> parse_orders(const std::string& text) {
    std::vector<vendi::Order> qs;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if (token == "inf" || token == "infinity") {
            qs.push_back(vendi::Order::infinity());
            continue;
        }
        const auto colon = token.find(':');
        if (colon != std::string::npos) {
            // min:max:steps, inclusive linear grid
            const auto colon2 = token.find(':', colon + 1);
            if (colon2 == std::string::npos) throw BadArgs("grid token needs min:max:steps");
            try {
                const double lo = std::stod(token.substr(0, colon));
                const double hi = std::stod(token.substr(colon + 1, colon2 - colon - 1));
                const int steps = std::stoi(token.substr(colon2 + 1));
                if (steps < 1 || hi < lo) throw BadArgs("bad q grid");
                for (int i = 0; i < steps; ++i) {
                    const double q =
                        steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
                    qs.push_back(vendi::Order::of(q));
                }
            } catch (const std::invalid_argument&) {
                throw BadArgs(fmt::format("cannot parse q grid token '{}'", token));
            }
            continue;
        }
        try {
            const double q = std::stod(token);
            if (q < 0.0) throw BadArgs("orders must be >= 0");
            qs.push_back(vendi::Order::of(q));
        } catch (const std::invalid_argument&) {
            throw BadArgs(fmt::format("cannot parse order '{}'", token));
        }
    }
    if (qs.empty()) throw BadArgs("no orders given");
    return qs;
}

vendi::Kernel parse_kernel(const std::string& name, double gamma, double weight) {
    if (name == "linear") return vendi::Kernel::linear();
    if (name == "cosine") return vendi::Kernel::cosine();
    if (name == "rbf") return vendi::Kernel::rbf(gamma);
    if (name == "ratio1d") return vendi::Kernel::ratio1d();
    if (name == "shape-color") return vendi::Kernel::shape_color(weight);
    throw BadArgs(fmt::format("unknown kernel '{}'", name));
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        vendi::write_text_atomic(out_path, content);
}

std::vector<vendi::ScoreReport> score_reports(const Eigen::MatrixXd& input,
                                              const std::string& kind,
                                              const vendi::Kernel& kernel,
                                              const std::vector<vendi::Order>& qs,
                                              std::optional<Eigen::Index> m,
                                              double support_tol, std::uint64_t seed) {
    if (kind == "abundance") {
        Eigen::VectorXd p;
        if (input.rows() == 1)
            p = input.row(0).transpose();
        else if (input.cols() == 1)
            p = input.col(0);
        else
            throw vendi::InvalidInput("abundance input must be a single row or column");
        std::vector<vendi::ScoreReport> reports;
        for (const auto& q : qs) {
            vendi::ScoreReport r;
            r.q = q;
            r.score = vendi::hill_number(p, q);
            r.support_count = (p.array() > 0.0).count();
            r.uninformative = q.is_zero();
            reports.push_back(r);
        }
        return reports;
    }
    if (kind == "kernel") {
        if (input.rows() != input.cols())
            throw vendi::InvalidInput(fmt::format("kernel matrix must be square, got {}x{}",
                                                  input.rows(), input.cols()));
        if (!m) {
            const vendi::Spectrum s =
                vendi::eigenvalues(vendi::normalize(input), support_tol);
            return vendi::score_profile_from_spectrum(s, qs);
        }
        // Subsampled approximation: the chosen m-item sub-collection is
        // scored as its own collection.
        const auto basis = vendi::subsample_basis(input.rows(), *m, seed);
        const Eigen::MatrixXd projected =
            vendi::project(vendi::normalize(input), basis) * static_cast<double>(input.rows()) /
            static_cast<double>(*m);
        const vendi::Spectrum s = vendi::spectrum_from_raw(
            vendi::symmetric_eigenvalues_desc(projected), support_tol);
        auto reports = vendi::score_profile_from_spectrum(s, qs);
        for (auto& r : reports) {
            r.method = vendi::ScoreMethod::Subsampled;
            r.m = *m;
        }
        return reports;
    }
    if (kind == "embeddings") {
        std::vector<vendi::ScoreReport> reports;
        for (const auto& q : qs)
            reports.push_back(vendi::vendi_score_from_embeddings(input, q, m, support_tol));
        return reports;
    }
    throw BadArgs(fmt::format("unknown input kind '{}'", kind));
}

std::string reports_csv(const std::vector<vendi::ScoreReport>& reports) {
    std::string out = "q,score,support_count,method\n";
    for (const auto& r : reports)
        out += fmt::format("{},{},{},{}\n", r.q.str(), vendi::format_double(r.score),
                           r.support_count, r.method_str());
    return out;
}

std::string reports_json(const std::vector<vendi::ScoreReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json row{{"q", r.q.str()},
                 {"score", r.score},
                 {"support_count", r.support_count},
                 {"method", r.method_str()}};
        if (r.uninformative) row["uninformative"] = true;
        arr.push_back(row);
    }
    return arr.dump(2) + "\n";
}

vendi::SamplerConfig parse_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw vendi::InvalidInput(fmt::format("cannot open {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw vendi::InvalidInput(fmt::format("{}: {}", path.string(), e.what()));
    }

    static const std::set<std::string> known{
        "replicas",  "step_size", "total_steps",   "nu0",  "anneal_rate", "q",
        "kernel",    "gamma",     "potential",     "init_box", "seed",
        "record_stride", "bias_clip", "support_tol"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key))
            throw vendi::InvalidInput(fmt::format("{}: unknown config key '{}'", path.string(), key));

    vendi::SamplerConfig cfg;
    try {
        cfg.replicas = doc.value("replicas", cfg.replicas);
        cfg.step_size = doc.value("step_size", cfg.step_size);
        cfg.total_steps = doc.value("total_steps", cfg.total_steps);
        cfg.nu0 = doc.value("nu0", cfg.nu0);
        cfg.anneal_rate = doc.value("anneal_rate", cfg.anneal_rate);
        cfg.init_box = doc.value("init_box", cfg.init_box);
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.record_stride = doc.value("record_stride", cfg.record_stride);
        cfg.bias_clip = doc.value("bias_clip", cfg.bias_clip);
        cfg.support_tol = doc.value("support_tol", cfg.support_tol);
        if (doc.contains("q")) {
            if (doc["q"].is_string())
                cfg.q = doc["q"].get<std::string>() == "inf"
                            ? vendi::Order::infinity()
                            : vendi::Order::of(std::stod(doc["q"].get<std::string>()));
            else
                cfg.q = vendi::Order::of(doc["q"].get<double>());
        }
        if (doc.contains("kernel")) {
            const auto name = doc["kernel"].get<std::string>();
            cfg.kernel = parse_kernel(name, doc.value("gamma", 1.0), 0.5);
            if (cfg.kernel.kind != vendi::KernelKind::Rbf &&
                cfg.kernel.kind != vendi::KernelKind::Ratio1d)
                throw vendi::InvalidInput("sampler kernel must be rbf or ratio1d");
        }
        if (doc.contains("potential")) {
            const auto& p = doc["potential"];
            for (const auto& [key, _] : p.items())
                if (key != "a" && key != "b" && key != "c")
                    throw vendi::InvalidInput(fmt::format("unknown potential key '{}'", key));
            cfg.potential.a = p.value("a", cfg.potential.a);
            cfg.potential.b = p.value("b", cfg.potential.b);
            cfg.potential.c = p.value("c", cfg.potential.c);
        }
    } catch (const json::exception& e) {
        throw vendi::InvalidInput(fmt::format("{}: {}", path.string(), e.what()));
    } catch (const BadArgs& e) {
        throw vendi::InvalidInput(fmt::format("{}: {}", path.string(), e.what()));
    }
    if (cfg.replicas < 1 || cfg.step_size <= 0.0 || cfg.total_steps < 0 ||
        cfg.nu0 < 0.0 || cfg.anneal_rate < 0.0 || cfg.record_stride < 1 ||
        cfg.potential.a <= 0.0)
        throw vendi::InvalidInput(fmt::format("{}: config fails validation", path.string()));
    return cfg;
}

int cmd_sample_dw(const std::string& config_path, const std::string& out_dir) {
    const vendi::SamplerConfig cfg = parse_run_config(config_path);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    const vendi::Trajectory traj = vendi::run_vendi_sampling(cfg);

    // trajectory.csv: one row per record, replica coordinates inline.
    {
        std::string out = "record,step,nu";
        for (Eigen::Index i = 0; i < cfg.replicas; ++i) out += fmt::format(",x{0},y{0}", i);
        out += '\n';
        for (std::size_t rec = 0; rec < traj.positions.size(); ++rec) {
            out += fmt::format("{},{},{}", rec, traj.record_steps[rec],
                               vendi::format_double(traj.nu_history[rec]));
            const auto& snap = traj.positions[rec];
            for (Eigen::Index i = 0; i < snap.rows(); ++i)
                out += fmt::format(",{},{}", vendi::format_double(snap(i, 0)),
                                   vendi::format_double(snap(i, 1)));
            out += '\n';
        }
        vendi::write_text_atomic(dir / "trajectory.csv", out);
    }

    const auto transitions = vendi::count_transitions(traj);
    {
        std::string out = "record,step,cumulative_transitions\n";
        for (std::size_t rec = 0; rec < transitions.size(); ++rec)
            out += fmt::format("{},{},{}\n", rec, traj.record_steps[rec], transitions[rec]);
        vendi::write_text_atomic(dir / "transitions.csv", out);
    }

    const double oracle = vendi::free_energy_oracle(cfg.potential);
    {
        std::string out = "estimate,n_right,n_left,window_begin,window_end,oracle\n";
        try {
            const auto [begin, end] = vendi::unbiased_window(traj);
            const auto est = vendi::free_energy_difference(traj, begin, end);
            out += fmt::format("{},{},{},{},{},{}\n", vendi::format_double(est.free_energy),
                               est.n_right, est.n_left, est.window_begin, est.window_end,
                               vendi::format_double(oracle));
        } catch (const vendi::InvalidInput& e) {
            out += fmt::format("nan,0,0,0,0,{}\n", vendi::format_double(oracle));
            std::cerr << "vendi: free energy estimate unavailable: " << e.what() << "\n";
        }
        vendi::write_text_atomic(dir / "free_energy.csv", out);
    }
    vendi::write_text_atomic(dir / "oracle.txt", vendi::format_double(oracle) + "\n");
    return 0;
}

int cmd_correlate(const std::string& input, const std::string& out_path) {
    const vendi::NamedTable table = vendi::read_named_table(input);
    const Eigen::Index n = table.values.rows();
    const Eigen::Index k = table.values.cols();
    if (k < 2) throw vendi::InvalidInput("correlation needs at least 2 columns");
    if (n < 3) throw vendi::InvalidInput("correlation needs at least 3 rows");

    const Eigen::RowVectorXd mean = table.values.colwise().mean();
    const Eigen::MatrixXd centered = table.values.rowwise() - mean;
    const Eigen::VectorXd sd =
        (centered.array().square().colwise().sum() / static_cast<double>(n - 1)).sqrt();
    for (Eigen::Index j = 0; j < k; ++j)
        if (sd(j) == 0.0) {
            std::cerr << fmt::format("vendi: column '{}' is constant; correlation undefined\n",
                                     table.columns[static_cast<std::size_t>(j)]);
            return 6;
        }

    Eigen::MatrixXd corr(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        corr(a, a) = 1.0;
        for (Eigen::Index b = a + 1; b < k; ++b) {
            const double cov =
                centered.col(a).dot(centered.col(b)) / static_cast<double>(n - 1);
            corr(a, b) = corr(b, a) = cov / (sd(a) * sd(b));
        }
    }

    std::string out = "metric";
    for (const auto& name : table.columns) out += "," + name;
    out += '\n';
    for (Eigen::Index a = 0; a < k; ++a) {
        out += table.columns[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < k; ++b) out += "," + vendi::format_double(corr(a, b));
        out += '\n';
    }
    emit(out, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("VENDI_THREADS")) {
        const int n = std::atoi(threads);
        if (n > 0) Eigen::setNbThreads(n);
    }

    CLI::App app{"Similarity-based diversity scores of arbitrary order, their gradients, and "
                 "diversity-enforced Langevin sampling"};
    app.require_subcommand(1);

    std::string input, out_path, kind = "kernel", kernel_name = "linear", q_text = "1";
    double gamma = 1.0, weight = 0.5, support_tol = vendi::kDefaultSupportTol;
    std::int64_t m_flag = -1;
    std::uint64_t seed = 0;
    bool as_json = false;

    auto* score = app.add_subcommand("score", "Vendi scores / Hill numbers of a matrix file");
    score->add_option("--input", input, "matrix file (CSV or binary)")->required();
    score->add_option("--kind", kind, "embeddings | kernel | abundance");
    score->add_option("--kernel", kernel_name, "linear | cosine | rbf | ratio1d | shape-color");
    score->add_option("--gamma", gamma, "rbf bandwidth");
    score->add_option("--weight", weight, "shape-color partial-match weight");
    score->add_option("--q", q_text, "comma-separated orders, e.g. 0.5,1,2,inf");
    score->add_option("--m", m_flag, "projection/subsample rank");
    score->add_option("--support-tol", support_tol, "relative eigenvalue support threshold");
    score->add_option("--seed", seed, "subsampling seed");
    score->add_option("--out", out_path, "write report here instead of stdout");
    score->add_flag("--json", as_json, "emit JSON instead of CSV");

    std::string q_grid = "0.5:2:4,inf";
    auto* sweep = app.add_subcommand("sweep", "diversity profile over a q grid");
    sweep->add_option("--input", input)->required();
    sweep->add_option("--kind", kind);
    sweep->add_option("--kernel", kernel_name);
    sweep->add_option("--gamma", gamma);
    sweep->add_option("--support-tol", support_tol);
    sweep->add_option("--q-grid", q_grid, "comma list of orders, min:max:steps ranges, and inf");
    sweep->add_option("--out", out_path);

    std::string config_path, out_dir = ".";
    auto* sample = app.add_subcommand("sample-dw", "double-well Vendi sampling run");
    sample->add_option("--config", config_path, "run configuration JSON")->required();
    sample->add_option("--out-dir", out_dir, "output directory");

    std::string panel = "A";
    auto* scenario = app.add_subcommand("scenario", "shape-color scenario panel table");
    scenario->add_option("--panel", panel, "A | B | C | D | E");
    scenario->add_option("--q", q_text);
    scenario->add_option("--seed", seed);
    scenario->add_option("--out", out_path);

    auto* correlate = app.add_subcommand("correlate", "Pearson correlation matrix of named columns");
    correlate->add_option("--input", input)->required();
    correlate->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 4;
    }

    try {
        if (score->parsed() || sweep->parsed()) {
            const auto qs = parse_orders(sweep->parsed() ? q_grid : q_text);
            const Eigen::MatrixXd matrix = vendi::read_matrix(input);
            const vendi::Kernel kernel = parse_kernel(kernel_name, gamma, weight);
            std::optional<Eigen::Index> m;
            if (m_flag >= 0 && score->parsed()) m = m_flag;

            auto qs_sorted = qs;
            if (sweep->parsed())
                std::sort(qs_sorted.begin(), qs_sorted.end(),
                          [](const vendi::Order& a, const vendi::Order& b) {
                              if (a.is_infinity) return false;
                              if (b.is_infinity) return true;
                              return a.value < b.value;
                          });
            const auto reports =
                score_reports(matrix, kind, kernel, qs_sorted, m, support_tol, seed);
            emit(as_json ? reports_json(reports) : reports_csv(reports), out_path);
            return 0;
        }
        if (sample->parsed()) return cmd_sample_dw(config_path, out_dir);
        if (scenario->parsed()) {
            if (panel.size() != 1 || panel[0] < 'A' || panel[0] > 'E')
                throw BadArgs(fmt::format("unknown panel '{}'", panel));
            const auto qs = parse_orders(q_text);
            const auto rows = vendi::evaluate_panel(panel[0], qs, seed);
            std::string out = "panel,param,q,score\n";
            for (const auto& row : rows)
                out += fmt::format("{},{},{},{}\n", row.panel, row.param, row.q.str(),
                                   vendi::format_double(row.score));
            emit(out, out_path);
            return 0;
        }
        if (correlate->parsed()) return cmd_correlate(input, out_path);
    } catch (const BadArgs& e) {
        std::cerr << "vendi: " << e.what() << "\n";
        return 4;
    } catch (const vendi::IndefiniteKernel& e) {
        std::cerr << "vendi: " << e.what() << "\n";
        return 3;
    } catch (const vendi::Divergence& e) {
        std::cerr << "vendi: " << e.what() << "\n";
        return 5;
    } catch (const vendi::InvalidInput& e) {
        std::cerr << "vendi: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "vendi: " << e.what() << "\n";
        return 1;
    }
    return 4;
}
