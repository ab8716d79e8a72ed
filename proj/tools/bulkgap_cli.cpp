// Command-line surface: constants calculator, Monte Carlo experiments,
// verification suites, and the gap-probability engines, with plot-ready CSV
// emission. Exit codes: 0 success, 1 verification failure, 2 usage/config
// error, 3 numerical failure.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bulkgap/detengine.hpp"
#include "bulkgap/equilibrium.hpp"
#include "bulkgap/harness.hpp"
#include "bulkgap/verify.hpp"

using namespace bulkgap;

namespace {

EnsembleSpec spec_of(Ensemble kind) {
    switch (kind) {
        case Ensemble::gue: return EnsembleSpec::gue();
        case Ensemble::lue: return EnsembleSpec::lue();
        default: return EnsembleSpec::jue();
    }
}

Ensemble parse_ensemble(const std::string& s) {
    if (s == "gue") return Ensemble::gue;
    if (s == "lue") return Ensemble::lue;
    if (s == "jue") return Ensemble::jue;
    throw std::invalid_argument("unknown ensemble '" + s + "' (expected gue, lue, or jue)");
}

std::string f17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Minimal TOML-subset reader for experiment configs: one optional
// [experiment] section, key = value lines, # comments, arrays of numbers.
// Unknown sections or keys are rejected.
struct ConfigFile {
    ExperimentConfig cfg;
    std::vector<std::string> seen;

    static std::string strip(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static long long to_int(const std::string& v, const std::string& key) {
        std::size_t used = 0;
        long long r = 0;
        try {
            r = std::stoll(v, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "' wants an integer, got '" + v + "'");
        }
        if (used != v.size())
            throw std::invalid_argument("config key '" + key + "' wants an integer, got '" + v + "'");
        return r;
    }

    static double to_double(const std::string& v, const std::string& key) {
        std::size_t used = 0;
        double r = 0;
        try {
            r = std::stod(v, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "' wants a number, got '" + v + "'");
        }
        if (used != v.size())
            throw std::invalid_argument("config key '" + key + "' wants a number, got '" + v + "'");
        return r;
    }

    static std::string to_string_value(const std::string& v, const std::string& key) {
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
            return v.substr(1, v.size() - 2);
        throw std::invalid_argument("config key '" + key + "' wants a quoted string, got '" + v + "'");
    }

    static std::vector<std::string> split_array(const std::string& v, const std::string& key) {
        if (v.size() < 2 || v.front() != '[' || v.back() != ']')
            throw std::invalid_argument("config key '" + key + "' wants an array [..]");
        std::vector<std::string> out;
        std::string body = v.substr(1, v.size() - 2);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            std::string piece = strip(comma == std::string::npos ? body.substr(pos)
                                                                 : body.substr(pos, comma - pos));
            if (!piece.empty()) out.push_back(piece);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (out.empty())
            throw std::invalid_argument("config key '" + key + "' has an empty array");
        return out;
    }

    void apply(const std::string& key, const std::string& value) {
        seen.push_back(key);
        if (key == "ensemble") {
            cfg.kind = parse_ensemble(to_string_value(value, key));
        } else if (key == "n") {
            cfg.n = (int)to_int(value, key);
        } else if (key == "replicas") {
            cfg.replicas = (int)to_int(value, key);
        } else if (key == "interval") {
            cfg.I = IntervalUnion::parse(to_string_value(value, key));
        } else if (key == "k_list") {
            cfg.k_list.clear();
            for (const auto& p : split_array(value, key))
                cfg.k_list.push_back((int)to_int(p, key));
        } else if (key == "x_list") {
            cfg.x_list.clear();
            for (const auto& p : split_array(value, key))
                cfg.x_list.push_back(to_double(p, key));
        } else if (key == "seed") {
            cfg.seed = (std::uint64_t)to_int(value, key);
        } else if (key == "workers") {
            cfg.workers = (int)to_int(value, key);
        } else if (key == "out") {
            cfg.out_dir = to_string_value(value, key);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }

    void load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open config file " + path);
        std::string line;
        bool in_experiment = true;  // sectionless keys belong to [experiment]
        int lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = strip(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line != "[experiment]")
                    throw std::invalid_argument("unknown config section " + line);
                in_experiment = true;
                continue;
            }
            std::size_t eq = line.find('=');
            if (eq == std::string::npos || !in_experiment)
                throw std::invalid_argument("cannot parse config line " +
                                            std::to_string(lineno));
            apply(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
        }
    }
};

int cmd_constants(Ensemble kind, const std::string& interval, bool as_json) {
    const EnsembleSpec spec = spec_of(kind);
    const IntervalUnion I = IntervalUnion::parse(interval);
    const MinimizerReport rep = classify_minimizers(spec, I);
    const EquilibriumConstants cons = constants(spec, I, rep);

    if (as_json) {
        nlohmann::json j;
        j["ensemble"] = ensemble_name(kind);
        j["interval"] = I.str();
        j["rho_I"] = cons.rho_I;
        j["q"] = cons.q;
        j["M_I"] = cons.M_I;
        j["S_I"] = cons.S_I;
        j["c_VI"] = cons.c_VI;
        j["c0"] = cons.c0;
        nlohmann::json mins = nlohmann::json::array();
        for (const Minimizer& m : rep.all)
            mins.push_back({{"u", m.u}, {"q", m.q}, {"d", m.d}, {"boundary", m.boundary}});
        j["minimizers"] = mins;
        j["A"] = nlohmann::json::array();
        for (const Minimizer& m : rep.A) j["A"].push_back(m.u);
        j["B"] = nlohmann::json::array();
        for (const Minimizer& m : rep.B) j["B"].push_back(m.u);
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }

    std::printf("ensemble  %s    interval %s\n", ensemble_name(kind), I.str().c_str());
    std::printf("%-8s %s\n", "rho_I", f17(cons.rho_I).c_str());
    std::printf("%-8s %d\n", "q", cons.q);
    auto print_set = [&](const char* tag, const std::vector<Minimizer>& ms) {
        std::printf("%-8s {", tag);
        for (std::size_t i = 0; i < ms.size(); ++i)
            std::printf("%s%.12g", i ? ", " : "", ms[i].u);
        std::printf("}\n");
    };
    print_set("A", rep.A);
    print_set("B", rep.B);
    for (const Minimizer& m : rep.all)
        std::printf("%-8s u=%-18.12g q=%-3d d=%-18.12g %s\n", "min", m.u, m.q, m.d,
                    m.boundary ? "boundary" : "interior");
    std::printf("%-8s %s\n", "M_I", f17(cons.M_I).c_str());
    std::printf("%-8s %s\n", "S_I", f17(cons.S_I).c_str());
    std::printf("%-8s %s\n", "c_VI", f17(cons.c_VI).c_str());
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, bool emit_cdf, bool as_json) {
    if (cfg.out_dir.empty())
        throw std::invalid_argument(
            "no output directory: pass --out, set out in the config, or set BULKGAP_OUT");
    const ExperimentResult res = run_experiment(cfg);
    write_experiment_files(res, cfg.out_dir);
    if (emit_cdf) write_cdf_files(res, cfg.out_dir);

    if (as_json) {
        nlohmann::json j;
        j["ensemble"] = ensemble_name(cfg.kind);
        j["n"] = cfg.n;
        j["replicas"] = cfg.replicas;
        j["interval"] = cfg.I.str();
        j["seed"] = cfg.seed;
        j["out_dir"] = cfg.out_dir;
        j["c_VI"] = res.consts.c_VI;
        j["wall_seconds"] = res.wall_seconds;
        for (std::size_t xi = 0; xi < cfg.x_list.size(); ++xi)
            j["exceedance"].push_back({{"x", cfg.x_list[xi]},
                                       {"mean", res.mean_count[xi]},
                                       {"var", res.var_count[xi]},
                                       {"theory", res.theory_mean[xi]}});
        for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
            const double v = res.ks_by_k[ki];
            const std::string key = "k" + std::to_string(cfg.k_list[ki]);
            if (std::isfinite(v))
                j["ks"][key] = v;
            else
                j["ks"][key] = nullptr;
        }
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }

    std::printf("%s n=%d replicas=%d I=%s seed=%llu workers=%d\n", ensemble_name(cfg.kind),
                cfg.n, cfg.replicas, cfg.I.str().c_str(), (unsigned long long)cfg.seed,
                cfg.workers);
    std::printf("c_VI = %.12g   wall %.2fs   files in %s\n", res.consts.c_VI,
                res.wall_seconds, cfg.out_dir.c_str());
    for (std::size_t xi = 0; xi < cfg.x_list.size(); ++xi)
        std::printf("x=%-8.4g mean=%-12.6g var=%-12.6g theory=%.6g\n", cfg.x_list[xi],
                    res.mean_count[xi], res.var_count[xi], res.theory_mean[xi]);
    for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
        const double v = res.ks_by_k[ki];
        if (std::isfinite(v))
            std::printf("KS k=%d: %.6g\n", cfg.k_list[ki], v);
        else
            std::printf("KS k=%d: no samples\n", cfg.k_list[ki]);
    }
    return 0;
}

int cmd_verify(const std::string& suite, bool as_json) {
    VerifyReport rep;
    try {
        rep = run_verify_suite(suite);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    if (as_json) {
        nlohmann::json j;
        j["suite"] = rep.suite;
        j["pass"] = rep.passed();
        j["checks"] = nlohmann::json::array();
        for (const VerifyCheck& c : rep.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"measured", c.measured},
                                   {"lo", c.lo},
                                   {"hi", c.hi},
                                   {"pass", c.pass}});
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::fputs(format_verify_report(rep).c_str(), stdout);
    }
    return rep.passed() ? 0 : 1;
}

struct GapProbArgs {
    std::string engine;
    int n = 100;
    double alpha = 0.1;
    double r = 1.0;
    int m = 80;
    std::string ensemble = "gue";
    double x = 0.0;
    double delta = 0.0;
    int sweep = 0;
    bool as_json = false;
};

int cmd_gap_prob(const GapProbArgs& a) {
    // sweep rows: (parameter, value, asymptotic, difference) on the log scale
    // for toeplitz/sine, on probabilities for finite vs the CUE arc law
    std::vector<std::array<double, 4>> rows;
    double value = 0.0, log_value = 0.0;
    const char* param_name = "";

    if (a.engine == "toeplitz") {
        log_value = log_toeplitz_gap_cue(a.n, a.alpha);
        value = std::exp(log_value);
        param_name = "alpha";
        for (int i = 1; i <= a.sweep; ++i) {
            const double al = a.alpha * i / a.sweep;
            const double lv = log_toeplitz_gap_cue(a.n, al);
            const double as = dikz_log_gap(a.n, al);
            rows.push_back({al, lv, as, lv - as});
        }
    } else if (a.engine == "sine") {
        value = sine_gap_fredholm(a.r, a.m);
        log_value = std::log(value);
        param_name = "r";
        for (int i = 1; i <= a.sweep; ++i) {
            const double r = a.r * i / a.sweep;
            const double lv = std::log(sine_gap_fredholm(r, a.m));
            const double as = -std::numbers::pi * std::numbers::pi * r * r / 8.0 -
                              0.25 * std::log(std::numbers::pi * r / 2.0) + c0_constant();
            rows.push_back({r, lv, as, lv - as});
        }
    } else if (a.engine == "finite") {
        const EnsembleSpec spec = spec_of(parse_ensemble(a.ensemble));
        value = finite_n_gap(spec, a.n, a.x, a.delta, a.m);
        log_value = std::log(value);
        param_name = "delta";
        const double rho = density(spec, a.x);
        for (int i = 1; i <= a.sweep; ++i) {
            const double d = a.delta * i / a.sweep;
            const double v = finite_n_gap(spec, a.n, a.x, d, a.m);
            const double as = toeplitz_gap_cue(a.n, std::numbers::pi * rho * d);
            rows.push_back({d, v, as, v - as});
        }
    } else {
        throw std::invalid_argument("unknown engine '" + a.engine +
                                    "' (expected toeplitz, sine, or finite)");
    }

    if (a.sweep > 0) {
        if (a.as_json) {
            nlohmann::json j;
            j["engine"] = a.engine;
            j["parameter"] = param_name;
            j["rows"] = nlohmann::json::array();
            for (const auto& r : rows)
                j["rows"].push_back({{"parameter", r[0]},
                                     {"value", r[1]},
                                     {"asymptotic", r[2]},
                                     {"difference", r[3]}});
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::printf("parameter,value,asymptotic,difference\r\n");
            for (const auto& r : rows)
                std::printf("%s,%s,%s,%s\r\n", f17(r[0]).c_str(), f17(r[1]).c_str(),
                            f17(r[2]).c_str(), f17(r[3]).c_str());
        }
        return 0;
    }

    if (a.as_json) {
        nlohmann::json j;
        j["engine"] = a.engine;
        j["value"] = value;
        j["log_value"] = log_value;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("%s\n", f17(value).c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for largest bulk eigenvalue gaps"};
    app.require_subcommand(1);

    auto* c_const = app.add_subcommand("constants", "equilibrium constants for an interval");
    std::string co_ensemble, co_interval;
    bool co_json = false;
    c_const->add_option("--ensemble", co_ensemble, "gue, lue, or jue")->required();
    c_const->add_option("--interval", co_interval, "lo:hi[,lo:hi...]")->required();
    c_const->add_flag("--json", co_json, "machine-readable output");

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo gap experiment");
    std::string si_config, si_ensemble, si_interval, si_out;
    int si_n = -1, si_replicas = -1, si_workers = -1;
    long long si_seed = -1;
    std::vector<int> si_k;
    std::vector<double> si_x;
    bool si_emit_cdf = false, si_json = false;
    c_sim->add_option("--config", si_config, "TOML-style config file");
    c_sim->add_option("--ensemble", si_ensemble, "gue, lue, or jue");
    c_sim->add_option("--n", si_n, "matrix size");
    c_sim->add_option("--replicas", si_replicas, "sample count");
    c_sim->add_option("--interval", si_interval, "lo:hi[,lo:hi...]");
    c_sim->add_option("--k", si_k, "gap orders for full CDFs")->delimiter(',');
    c_sim->add_option("--x", si_x, "exceedance evaluation points (increasing)")->delimiter(',');
    c_sim->add_option("--seed", si_seed, "master seed");
    c_sim->add_option("--workers", si_workers, "worker threads");
    c_sim->add_option("--out", si_out, "output directory (default $BULKGAP_OUT)");
    c_sim->add_flag("--emit-cdf", si_emit_cdf, "also write cdf_k<k>.csv");
    c_sim->add_flag("--json", si_json, "machine-readable summary");

    auto* c_ver = app.add_subcommand("verify", "run a named verification suite");
    std::string ve_suite;
    bool ve_json = false;
    std::string suites_help;
    for (const auto& s : verify_suite_names()) suites_help += s + " ";
    c_ver->add_option("suite", ve_suite, "one of: " + suites_help)->required();
    c_ver->add_flag("--json", ve_json, "machine-readable report");

    auto* c_gap = app.add_subcommand("gap-prob", "evaluate a gap-probability engine");
    GapProbArgs ga;
    c_gap->add_option("engine", ga.engine, "toeplitz, sine, or finite")->required();
    c_gap->add_option("--n", ga.n, "matrix / determinant size");
    c_gap->add_option("--alpha", ga.alpha, "CUE half-arc in (0, pi]");
    c_gap->add_option("--r", ga.r, "sine-kernel interval length");
    c_gap->add_option("--m", ga.m, "quadrature order");
    c_gap->add_option("--ensemble", ga.ensemble, "gue, lue, or jue (finite engine)");
    c_gap->add_option("--x", ga.x, "left endpoint of the gap (finite engine)");
    c_gap->add_option("--delta", ga.delta, "gap length (finite engine)");
    c_gap->add_option("--sweep", ga.sweep, "emit CSV over a grid of this many points")
        ->check(CLI::Range(0, 100000));
    c_gap->add_flag("--json", ga.as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (c_const->parsed())
            return cmd_constants(parse_ensemble(co_ensemble), co_interval, co_json);
        if (c_sim->parsed()) {
            ConfigFile file;
            if (!si_config.empty()) file.load(si_config);
            ExperimentConfig cfg = file.cfg;
            if (!si_ensemble.empty()) cfg.kind = parse_ensemble(si_ensemble);
            if (si_n >= 0) cfg.n = si_n;
            if (si_replicas >= 0) cfg.replicas = si_replicas;
            if (!si_interval.empty()) cfg.I = IntervalUnion::parse(si_interval);
            if (!si_k.empty()) cfg.k_list = si_k;
            if (!si_x.empty()) cfg.x_list = si_x;
            if (si_seed >= 0) cfg.seed = (std::uint64_t)si_seed;
            if (si_workers >= 0) cfg.workers = si_workers;
            if (!si_out.empty()) cfg.out_dir = si_out;
            if (cfg.out_dir.empty())
                if (const char* env = std::getenv("BULKGAP_OUT")) cfg.out_dir = env;
            return cmd_simulate(cfg, si_emit_cdf, si_json);
        }
        if (c_ver->parsed()) return cmd_verify(ve_suite, ve_json);
        if (c_gap->parsed()) return cmd_gap_prob(ga);
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
