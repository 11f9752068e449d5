// ordstat — BLUE/BLUP toolkit for Type-II right censored order statistics.
//
// Subcommands: moments, estimate, predict, verify-optimizer, verify-mc,
// verify-dominance.  JSON output is deterministic: identical inputs and
// seeds produce byte-identical documents.  Exit codes: 0 ok, 2 domain error,
// 3 numerical-precision error, 4 verification failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordstat/errors.hpp"
#include "ordstat/json_io.hpp"
#include "ordstat/prediction.hpp"
#include "ordstat/verification.hpp"

namespace fs = std::filesystem;
using ordstat::json;

namespace {

constexpr int kSchemaVersion = 1;

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const char* kind, const std::string& msg) {
    json j;
    j["error"] = kind;
    j["message"] = msg;
    std::cerr << j.dump() << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ordstat::DomainError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ordstat::DomainError("cannot write file: " + path);
    out << content;
}

// ---- ingestion -----------------------------------------------------------

// CSV: one value per line, optional "value" header.  JSON: {n, r, values[]}.
ordstat::CensoredSample ingest(const std::string& path, std::optional<int> n_flag,
                               std::optional<int> r_flag, bool allow_unsorted) {
    const std::string text = read_file(path);

    ordstat::CensoredSample sample;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ordstat::DomainError(std::string("JSON parse failure: ") + e.what());
        }
        sample = ordstat::censored_sample_from_json(j);
        if (n_flag && *n_flag != sample.n)
            throw ordstat::DomainError("--n does not match the n stored in the input file");
    } else {
        std::vector<double> vals;
        std::istringstream lines(text);
        std::string line;
        int lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) continue;
            if (lineno == 1 && (line == "value" || line == "Value" || line == "VALUE")) continue;
            try {
                size_t used = 0;
                double v = std::stod(line, &used);
                while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) ++used;
                if (used != line.size()) throw std::invalid_argument("trailing characters");
                vals.push_back(v);
            } catch (const std::exception&) {
                throw ordstat::DomainError("parse failure at line " + std::to_string(lineno) +
                                           ": '" + line + "'");
            }
        }
        if (!n_flag) throw ordstat::DomainError("--n is required for CSV input");
        sample.n = *n_flag;
        sample.values = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }

    if (sample.values.size() == 0) throw ordstat::DomainError("no observations");
    if (r_flag && *r_flag != sample.r())
        throw ordstat::DomainError("--r = " + std::to_string(*r_flag) + " does not match the " +
                                   std::to_string(sample.r()) + " values read");

    std::vector<double> v(sample.values.data(), sample.values.data() + sample.values.size());
    if (!std::is_sorted(v.begin(), v.end())) {
        if (!allow_unsorted)
            throw ordstat::DomainError("input values are not ascending (pass --allow-unsorted to sort)");
        std::sort(v.begin(), v.end());
        sample.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    sample.validate(); // rejects ties, checks 2 <= r <= n
    return sample;
}

// ---- moment-table acquisition with the on-disk cache ----------------------

fs::path cache_directory() {
    if (const char* dir = std::getenv("ORDSTAT_CACHE_DIR")) return fs::path(dir);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return fs::path(xdg) / "ordstat";
    if (const char* home = std::getenv("HOME")) return fs::path(home) / ".cache" / "ordstat";
    return fs::path(".ordstat-cache");
}

std::string cache_filename(ordstat::Family family, int n, double quad_tol, int quad_points) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(quad_tol));
    std::memcpy(&bits, &quad_tol, sizeof(bits));
    char buf[160];
    std::snprintf(buf, sizeof(buf), "moments-%s-n%d-p%d-t%016llx.json",
                  ordstat::family_name(family).c_str(), n, quad_points,
                  static_cast<unsigned long long>(bits));
    return buf;
}

ordstat::DistributionSpec load_custom_spec(const std::string& quantile_file) {
    json j;
    try {
        j = json::parse(read_file(quantile_file));
    } catch (const json::exception& e) {
        throw ordstat::DomainError(std::string("quantile file parse failure: ") + e.what());
    }
    auto u = j.at("u").get<std::vector<double>>();
    auto q = j.at("q").get<std::vector<double>>();
    if (u.size() != q.size() || u.size() < 2)
        throw ordstat::DomainError("quantile file needs matching u[] and q[] arrays (>= 2 points)");
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] <= 0.0 || u[i] >= 1.0) throw ordstat::DomainError("quantile grid u must lie in (0,1)");
        if (i > 0 && u[i] <= u[i - 1]) throw ordstat::DomainError("quantile grid u must be increasing");
    }
    ordstat::DistributionSpec spec;
    spec.family = ordstat::Family::CustomQuantile;
    spec.quantile = [u, q](double p) {
        if (p <= u.front()) return q.front();
        if (p >= u.back()) return q.back();
        const auto it = std::upper_bound(u.begin(), u.end(), p);
        const size_t hi = static_cast<size_t>(it - u.begin());
        const double w = (p - u[hi - 1]) / (u[hi] - u[hi - 1]);
        return q[hi - 1] + w * (q[hi] - q[hi - 1]);
    };
    return spec;
}

struct TableRequest {
    std::string family = "standard-normal";
    std::string quantile_file;
    int n = 0;
    double quad_tol = 1e-8;
    int quad_points = 64;
    bool no_cache = false;
    bool serial = false;
};

ordstat::MomentTable acquire_table(const TableRequest& req) {
    const ordstat::Family family = ordstat::family_from_name(req.family);
    const ordstat::Exec exec = req.serial ? ordstat::Exec::Serial : ordstat::Exec::Parallel;

    if (family == ordstat::Family::StandardExponential) return ordstat::exponential_moments(req.n);
    if (family == ordstat::Family::StandardUniform) return ordstat::uniform_moments(req.n);

    ordstat::DistributionSpec spec;
    if (family == ordstat::Family::CustomQuantile) {
        if (req.quantile_file.empty())
            throw ordstat::DomainError("--quantile-file is required with --family custom");
        spec = load_custom_spec(req.quantile_file);
    }
    spec.family = family;
    spec.quad_tol = req.quad_tol;
    spec.quad_points = req.quad_points;

    const bool cacheable = family != ordstat::Family::CustomQuantile && !req.no_cache;
    fs::path path;
    if (cacheable) {
        path = cache_directory() / cache_filename(family, req.n, req.quad_tol, req.quad_points);
        if (fs::exists(path)) {
            const json j = json::parse(read_file(path.string()));
            ordstat::MomentTable t = ordstat::moment_table_from_json(j);
            if (t.family == family && t.n == req.n && t.quad_tol == req.quad_tol) return t;
        }
    }
    ordstat::MomentTable t = ordstat::quadrature_moments(spec, req.n, exec);
    if (cacheable) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        const fs::path tmp = path.string() + ".tmp";
        write_file(tmp.string(), ordstat::to_json(t).dump(2) + "\n");
        fs::rename(tmp, path, ec);
        if (ec) fs::remove(tmp, ec);
    }
    return t;
}

// ---- target list parsing ---------------------------------------------------

std::vector<int> parse_targets(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto dash = tok.find('-', tok.front() == '-' ? 1 : 0);
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(tok));
            } else {
                const int a = std::stoi(tok.substr(0, dash));
                const int b = std::stoi(tok.substr(dash + 1));
                if (b < a) throw ordstat::DomainError("empty target range: " + tok);
                for (int v = a; v <= b; ++v) out.push_back(v);
            }
        } catch (const std::invalid_argument&) {
            throw ordstat::DomainError("cannot parse target token: '" + tok + "'");
        } catch (const std::out_of_range&) {
            throw ordstat::DomainError("target out of range: '" + tok + "'");
        }
    }
    if (out.empty()) throw ordstat::DomainError("nothing to predict: empty target list");
    std::sort(out.begin(), out.end());
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] == out[i - 1])
            throw ordstat::DomainError("duplicate target " + std::to_string(out[i]));
    return out;
}

void emit(const json& j, const std::string& format, const std::string& table_text) {
    if (format == "table") {
        std::cout << table_text;
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BLUE estimation and BLUP prediction for Type-II right censored samples"};
    app.require_subcommand(1);

    TableRequest table_req;
    std::string input_path, output_format = "json", targets_text;
    std::optional<int> r_flag;
    bool allow_unsorted = false, sigma_hat_scale = false;
    int s_idx = 0, t_idx = 0;
    double mu = 0.0, sigma = 1.0;
    long long replications = 100000, trials = 10000;
    std::uint64_t seed = 0;
    std::optional<double> fail_on;
    ordstat::OptimizerConfig opt_cfg;

    auto add_table_opts = [&](CLI::App* cmd, bool need_n) {
        cmd->add_option("--family", table_req.family,
                        "standard-normal | standard-exponential | standard-uniform | custom")
            ->default_val("standard-normal");
        cmd->add_option("--quantile-file", table_req.quantile_file,
                        "JSON {u:[],q:[]} grid for --family custom");
        auto* n_opt = cmd->add_option("--n", table_req.n, "total sample size");
        if (need_n) n_opt->required();
        cmd->add_option("--quad-tol", table_req.quad_tol, "quadrature tolerance")->default_val(1e-8);
        cmd->add_option("--quad-points", table_req.quad_points, "initial quadrature nodes")
            ->default_val(64);
        cmd->add_flag("--no-cache", table_req.no_cache, "bypass the moment-table cache");
        cmd->add_flag("--serial", table_req.serial, "run kernels on one thread");
        cmd->add_option("--output-format", output_format, "json | table")->default_val("json");
    };

    CLI::App* cmd_moments = app.add_subcommand("moments", "build or load a moment table");
    add_table_opts(cmd_moments, true);

    CLI::App* cmd_estimate = app.add_subcommand("estimate", "location/scale BLUEs from censored data");
    add_table_opts(cmd_estimate, false);
    cmd_estimate->add_option("--input", input_path, "CSV or JSON sample")->required();
    cmd_estimate->add_option("--r", r_flag, "observed count (must match the input)");
    cmd_estimate->add_flag("--allow-unsorted", allow_unsorted, "sort input values first");

    CLI::App* cmd_predict = app.add_subcommand("predict", "BLUPs of future order statistics");
    add_table_opts(cmd_predict, false);
    cmd_predict->add_option("--input", input_path, "CSV or JSON sample")->required();
    cmd_predict->add_option("--r", r_flag, "observed count (must match the input)");
    cmd_predict->add_option("--targets", targets_text, "e.g. 6-10 or 7,9")->required();
    cmd_predict->add_flag("--allow-unsorted", allow_unsorted, "sort input values first");
    cmd_predict->add_flag("--sigma-hat-scale", sigma_hat_scale,
                          "also report the MSPE matrix scaled by sigma_hat^2");

    CLI::App* cmd_opt = app.add_subcommand("verify-optimizer",
                                           "re-derive joint coefficients by numeric minimization");
    add_table_opts(cmd_opt, true);
    cmd_opt->add_option("--r", r_flag, "observed count")->required();
    cmd_opt->add_option("--s", s_idx, "first target")->required();
    cmd_opt->add_option("--t", t_idx, "second target")->required();
    cmd_opt->add_option("--seed", seed, "multi-start seed")->default_val(0);
    cmd_opt->add_option("--max-iters", opt_cfg.max_iters)->default_val(20000);
    cmd_opt->add_option("--grad-tol", opt_cfg.grad_tol)->default_val(1e-10);
    cmd_opt->add_option("--fail-on", fail_on, "exit 4 if max coefficient diff exceeds this");

    CLI::App* cmd_mc = app.add_subcommand("verify-mc", "Monte Carlo bias and MSPE check");
    add_table_opts(cmd_mc, true);
    cmd_mc->add_option("--r", r_flag, "observed count")->required();
    cmd_mc->add_option("--targets", targets_text, "targets")->required();
    cmd_mc->add_option("--mu", mu, "true location")->default_val(0.0);
    cmd_mc->add_option("--sigma", sigma, "true scale")->default_val(1.0);
    cmd_mc->add_option("--replications", replications)->default_val(100000);
    cmd_mc->add_option("--seed", seed)->default_val(0);
    cmd_mc->add_option("--fail-on", fail_on, "exit 4 if max relative MSPE error exceeds this");

    CLI::App* cmd_dom = app.add_subcommand("verify-dominance", "random MSPE dominance probe");
    add_table_opts(cmd_dom, true);
    cmd_dom->add_option("--r", r_flag, "observed count")->required();
    cmd_dom->add_option("--s", s_idx, "first target")->required();
    cmd_dom->add_option("--t", t_idx, "second target")->required();
    cmd_dom->add_option("--trials", trials)->default_val(10000);
    cmd_dom->add_option("--seed", seed)->default_val(0);
    cmd_dom->add_option("--fail-on", fail_on, "exit 4 if max violation exceeds this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("domain", e.what());
        return 2;
    }

    try {
        const ordstat::Exec exec = table_req.serial ? ordstat::Exec::Serial : ordstat::Exec::Parallel;

        if (cmd_moments->parsed()) {
            const ordstat::MomentTable t = acquire_table(table_req);
            json j = ordstat::to_json(t);
            std::string text;
            {
                std::ostringstream os;
                os << "moment table: " << ordstat::family_name(t.family) << ", n = " << t.n
                   << ", provenance = "
                   << (t.provenance == ordstat::Provenance::ClosedForm ? "closed-form" : "quadrature")
                   << "\n";
                if (t.provenance == ordstat::Provenance::Quadrature)
                    os << "quad_tol = " << t.quad_tol << ", achieved = " << t.achieved_tol
                       << ", quantile clip = " << t.clip_delta << "\n";
                os << "alpha:";
                char buf[64];
                for (int i = 0; i < t.n; ++i) {
                    std::snprintf(buf, sizeof(buf), " %8.4f", t.alpha(i));
                    os << buf;
                }
                os << "\nsigma:\n";
                for (int i = 0; i < t.n; ++i) {
                    for (int j2 = 0; j2 < t.n; ++j2) {
                        std::snprintf(buf, sizeof(buf), " %8.4f", t.sigma(i, j2));
                        os << buf;
                    }
                    os << "\n";
                }
                text = os.str();
            }
            emit(j, output_format, text);
            return 0;
        }

        if (cmd_estimate->parsed()) {
            const std::optional<int> nf =
                cmd_estimate->count("--n") ? std::optional<int>(table_req.n) : std::nullopt;
            const ordstat::CensoredSample sample = ingest(input_path, nf, r_flag, allow_unsorted);
            table_req.n = sample.n;
            const ordstat::MomentTable t = acquire_table(table_req);
            const ordstat::MomentSlice sl = ordstat::slice(t, sample.r(), {});
            const ordstat::BlueResult res = ordstat::blue(sample, sl);
            json j;
            j["schema_version"] = kSchemaVersion;
            j.update(ordstat::to_json(res));
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "mu_hat    %12.4f\nsigma_hat %12.4f\nvar_mu/sigma^2    %10.4f\n"
                          "var_sigma/sigma^2 %10.4f\ncov/sigma^2       %10.4f\ndelta     %12.4f\n",
                          res.mu_hat, res.sigma_hat, res.var_mu_unit, res.var_sigma_unit,
                          res.cov_unit, res.delta);
            emit(j, output_format, buf);
            return 0;
        }

        if (cmd_predict->parsed()) {
            const std::optional<int> nf =
                cmd_predict->count("--n") ? std::optional<int>(table_req.n) : std::nullopt;
            const ordstat::CensoredSample sample = ingest(input_path, nf, r_flag, allow_unsorted);
            table_req.n = sample.n;
            const std::vector<int> targets = parse_targets(targets_text);
            if (sample.r() >= sample.n)
                throw ordstat::DomainError("nothing to predict: r = n leaves no future order statistics");
            const ordstat::MomentTable t = acquire_table(table_req);
            const ordstat::MomentSlice sl = ordstat::slice(t, sample.r(), targets);
            const ordstat::PredictionSet set = ordstat::simultaneous_blup(sample, sl);
            json j;
            j["schema_version"] = kSchemaVersion;
            j.update(ordstat::to_json(set));
            std::string text = ordstat::render_prediction_table(set);
            if (sigma_hat_scale) {
                const double s2 = set.blue.sigma_hat * set.blue.sigma_hat;
                j["mspe_sigma_hat_scaled"] = ordstat::to_json(Eigen::MatrixXd(s2 * set.mspe.w));
                std::ostringstream os;
                os << text << "\nMSPE matrix scaled by sigma_hat^2:\n";
                char buf[64];
                for (int i = 0; i < set.mspe.w.rows(); ++i) {
                    for (int c = 0; c < set.mspe.w.cols(); ++c) {
                        std::snprintf(buf, sizeof(buf), " %10.4f", s2 * set.mspe.w(i, c));
                        os << buf;
                    }
                    os << "\n";
                }
                text = os.str();
            }
            emit(j, output_format, text);
            return 0;
        }

        if (cmd_opt->parsed()) {
            const ordstat::MomentTable t = acquire_table(table_req);
            const ordstat::MomentSlice sl = ordstat::slice(t, *r_flag, {s_idx, t_idx});
            opt_cfg.seed = seed;
            const ordstat::MinimizerResult res = ordstat::numeric_det_minimizer(sl, s_idx, t_idx, opt_cfg);
            const ordstat::AuxQuantities aux = ordstat::aux_quantities(sl);
            const ordstat::PredictorCoefficients pc = ordstat::simultaneous_coefficients(sl, aux);
            const ordstat::MspeMatrix w = ordstat::mspe_matrix(sl, aux);
            const double closed_obj = w.w.determinant();
            double coeff_diff = 0.0;
            coeff_diff = std::max((res.a - pc.coeffs.row(0).transpose()).cwiseAbs().maxCoeff(),
                                  (res.b - pc.coeffs.row(1).transpose()).cwiseAbs().maxCoeff());
            json j;
            j["schema_version"] = kSchemaVersion;
            j.update(ordstat::to_json(res, opt_cfg));
            j["closed_form_a"] = ordstat::to_json(Eigen::VectorXd(pc.coeffs.row(0).transpose()));
            j["closed_form_b"] = ordstat::to_json(Eigen::VectorXd(pc.coeffs.row(1).transpose()));
            j["closed_form_objective"] = closed_obj;
            j["max_coefficient_diff"] = coeff_diff;
            j["relative_objective_diff"] = std::abs(res.objective - closed_obj) / std::abs(closed_obj);
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "converged %d  iterations %d  grad_norm %.3e\n"
                          "max coefficient diff vs closed form %.3e\nobjective %.12f (closed %.12f)\n",
                          res.converged ? 1 : 0, res.iterations, res.grad_norm, coeff_diff,
                          res.objective, closed_obj);
            emit(j, output_format, buf);
            if (fail_on && coeff_diff > *fail_on)
                throw VerificationFailure("max coefficient diff " + std::to_string(coeff_diff) +
                                          " exceeds --fail-on threshold");
            return 0;
        }

        if (cmd_mc->parsed()) {
            const std::vector<int> targets = parse_targets(targets_text);
            const ordstat::Family family = ordstat::family_from_name(table_req.family);
            ordstat::DistributionSpec spec;
            if (family == ordstat::Family::CustomQuantile) {
                if (table_req.quantile_file.empty())
                    throw ordstat::DomainError("--quantile-file is required with --family custom");
                spec = load_custom_spec(table_req.quantile_file);
            }
            spec.family = family;
            spec.quad_tol = table_req.quad_tol;
            spec.quad_points = table_req.quad_points;
            const ordstat::MomentTable t = acquire_table(table_req);
            const ordstat::MonteCarloReport rep = ordstat::monte_carlo(
                spec, mu, sigma, table_req.n, *r_flag, targets, replications, seed, exec, &t);
            json j;
            j["schema_version"] = kSchemaVersion;
            j.update(ordstat::to_json(rep));
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "replications %lld  seed %llu\nmax relative MSPE error %.4f\n",
                          rep.replications, static_cast<unsigned long long>(rep.seed),
                          rep.max_relative_mspe_error);
            emit(j, output_format, buf);
            if (fail_on) {
                if (rep.replications < 10000)
                    throw ordstat::DomainError("pass/fail judgment needs >= 10000 replications");
                if (rep.max_relative_mspe_error > *fail_on)
                    throw VerificationFailure("max relative MSPE error " +
                                              std::to_string(rep.max_relative_mspe_error) +
                                              " exceeds --fail-on threshold");
            }
            return 0;
        }

        if (cmd_dom->parsed()) {
            const ordstat::MomentTable t = acquire_table(table_req);
            const ordstat::MomentSlice sl = ordstat::slice(t, *r_flag, {s_idx, t_idx});
            const ordstat::DominanceReport rep =
                ordstat::dominance_probe(sl, s_idx, t_idx, trials, seed, exec);
            json j;
            j["schema_version"] = kSchemaVersion;
            j.update(ordstat::to_json(rep));
            char buf[160];
            std::snprintf(buf, sizeof(buf), "trials %lld  seed %llu\nmax violation %.3e\n",
                          rep.trials, static_cast<unsigned long long>(rep.seed), rep.max_violation);
            emit(j, output_format, buf);
            if (fail_on) {
                if (rep.trials < 1000)
                    throw ordstat::DomainError("pass/fail judgment needs >= 1000 trials");
                if (rep.max_violation > *fail_on)
                    throw VerificationFailure("max violation " + std::to_string(rep.max_violation) +
                                              " exceeds --fail-on threshold");
            }
            return 0;
        }
    } catch (const VerificationFailure& e) {
        print_error("verification", e.what());
        return 4;
    } catch (const ordstat::DomainError& e) {
        print_error("domain", e.what());
        return 2;
    } catch (const ordstat::PrecisionError& e) {
        print_error("numerical-precision", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("domain", e.what());
        return 2;
    }
    return 0;
}
