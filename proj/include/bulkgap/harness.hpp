#pragma once
// Monte Carlo harness. Samples spectra replica by replica, extracts bulk
// gaps on an interval union, rescales them to tau variables, and aggregates
// exceedance counts and empirical tau laws. Replicas are sharded across
// worker threads with one RNG stream per replica, so every number in the
// result is a pure function of (seed, config) regardless of worker count or
// execution order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bulkgap/ensembles.hpp"
#include "bulkgap/equilibrium.hpp"
#include "bulkgap/errors.hpp"
#include "bulkgap/gapstats.hpp"
#include "bulkgap/intervals.hpp"
#include "bulkgap/limitlaws.hpp"

namespace bulkgap {

inline constexpr char artifact_version[] = "1.0.0";

struct ExperimentConfig {
    Ensemble kind = Ensemble::gue;
    int n = 500;
    int replicas = 100;
    IntervalUnion I{0.5, 1.0};
    std::vector<int> k_list{1};
    std::vector<double> x_list{0.0};
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir;  // consumed by the writers, not by run_experiment

    void validate() const {
        if (kind == Ensemble::custom)
            throw std::invalid_argument("experiments need a builtin sampler");
        if (n < 50) throw std::invalid_argument("experiment wants n >= 50");
        if (replicas < 1) throw std::invalid_argument("experiment wants replicas >= 1");
        if (workers < 1 || workers > 256)
            throw std::invalid_argument("worker count must lie in [1, 256]");
        if (k_list.empty()) throw std::invalid_argument("k_list must not be empty");
        for (int k : k_list)
            if (k < 1) throw std::invalid_argument("gap orders must be >= 1");
        for (std::size_t i = 1; i < x_list.size(); ++i)
            if (!(x_list[i] > x_list[i - 1]))
                throw std::invalid_argument("x_list must increase strictly");
    }
};

struct ExperimentResult {
    ExperimentConfig config;
    EquilibriumConstants consts;
    // tau_k per replica for each k in k_list; NaN marks a replica with fewer
    // than k gaps (missing, never fabricated)
    std::vector<std::vector<double>> taus;
    // #{tau_j >= x} over all gaps of the replica, per x in x_list
    std::vector<std::vector<int>> exceedance;
    std::vector<double> mean_count;   // per x
    std::vector<double> var_count;    // per x, unbiased across replicas
    std::vector<double> theory_mean;  // e^{c_VI - x}
    std::vector<double> ks_by_k;      // KS(tau_k, gamma-Gumbel), NaN if no samples
    double wall_seconds = 0.0;        // never serialized: files stay byte-stable
};

namespace detail {

inline SpectrumSample sample_kind(Ensemble kind, int n, std::uint64_t seed,
                                  std::uint64_t replica) {
    switch (kind) {
        case Ensemble::gue: return sample_gue(n, seed, replica);
        case Ensemble::lue: return sample_lue(n, seed, replica);
        default: return sample_jue(n, seed, replica);
    }
}

} // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();

    EnsembleSpec spec;
    switch (config.kind) {
        case Ensemble::gue: spec = EnsembleSpec::gue(); break;
        case Ensemble::lue: spec = EnsembleSpec::lue(); break;
        default: spec = EnsembleSpec::jue(); break;
    }
    const auto report = classify_minimizers(spec, config.I);
    ExperimentResult out;
    out.config = config;
    out.consts = constants(spec, config.I, report);
    const RescaleParams params(config.n, out.consts);

    const int R = config.replicas;
    const std::size_t nk = config.k_list.size(), nx = config.x_list.size();
    out.taus.assign(R, std::vector<double>(nk, std::numeric_limits<double>::quiet_NaN()));
    out.exceedance.assign(R, std::vector<int>(nx, 0));

    const int W = std::min(config.workers, R);
    std::vector<std::exception_ptr> perr(W);
    auto worker = [&](int w) {
        try {
            for (int r = w; r < R; r += W) {
                const auto sample = detail::sample_kind(config.kind, config.n,
                                                        config.seed, (std::uint64_t)r);
                const GapList gl = extract_gaps(sample, config.I);
                std::vector<double> tau_all;
                tau_all.reserve(gl.gaps.size());
                for (const GapEntry& g : gl.gaps)
                    tau_all.push_back(rescale_gap(params, g.value));
                for (std::size_t xi = 0; xi < nx; ++xi)
                    out.exceedance[r][xi] = exceedance_count(tau_all, config.x_list[xi]);
                for (std::size_t ki = 0; ki < nk; ++ki) {
                    const int k = config.k_list[ki];
                    if ((std::size_t)k <= gl.gaps.size())
                        out.taus[r][ki] = rescale_gap(params, gl.kth(k));
                }
            }
        } catch (...) {
            perr[w] = std::current_exception();
        }
    };
    if (W == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < W; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : perr)
        if (e) std::rethrow_exception(e);

    out.mean_count.assign(nx, 0.0);
    out.var_count.assign(nx, 0.0);
    out.theory_mean.assign(nx, 0.0);
    for (std::size_t xi = 0; xi < nx; ++xi) {
        double s = 0.0;
        for (int r = 0; r < R; ++r) s += out.exceedance[r][xi];
        const double mean = s / R;
        double ss = 0.0;
        for (int r = 0; r < R; ++r) {
            const double d = out.exceedance[r][xi] - mean;
            ss += d * d;
        }
        out.mean_count[xi] = mean;
        out.var_count[xi] = R > 1 ? ss / (R - 1) : 0.0;
        out.theory_mean[xi] = std::exp(out.consts.c_VI - config.x_list[xi]);
    }

    out.ks_by_k.assign(nk, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t ki = 0; ki < nk; ++ki) {
        std::vector<double> sample;
        for (int r = 0; r < R; ++r)
            if (std::isfinite(out.taus[r][ki])) sample.push_back(out.taus[r][ki]);
        if (sample.empty()) continue;
        const GammaGumbel law(config.k_list[ki], out.consts.c_VI);
        out.ks_by_k[ki] =
            ks_distance(std::move(sample), [&](double x) { return gamma_gumbel_cdf(law, x); });
    }

    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f.flush()) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace detail

// experiment.json, taus.csv, exceedance.csv under dir. CSVs are RFC 4180
// (CRLF, header row, 17 significant digits); all three are written through a
// temp file and renamed. Content depends only on (seed, config).
inline void write_experiment_files(const ExperimentResult& res, const std::string& dir);

// cdf_k<k>.csv per k in k_list: sorted tau, empirical CDF, gamma-Gumbel CDF.
inline void write_cdf_files(const ExperimentResult& res, const std::string& dir);

} // namespace bulkgap

#include <json.hpp>

namespace bulkgap {

inline void write_experiment_files(const ExperimentResult& res, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const ExperimentConfig& c = res.config;

    nlohmann::json j;
    j["version"] = artifact_version;
    j["config"]["ensemble"] = c.kind == Ensemble::gue   ? "gue"
                              : c.kind == Ensemble::lue ? "lue"
                                                        : "jue";
    j["config"]["n"] = c.n;
    j["config"]["replicas"] = c.replicas;
    std::vector<std::vector<double>> parts;
    for (const Interval& p : c.I.parts()) parts.push_back({p.lo, p.hi});
    j["config"]["interval"] = parts;
    j["config"]["k_list"] = c.k_list;
    j["config"]["x_list"] = c.x_list;
    j["config"]["seed"] = c.seed;
    j["config"]["workers"] = c.workers;
    j["constants"]["rho_I"] = res.consts.rho_I;
    j["constants"]["q"] = res.consts.q;
    j["constants"]["M_I"] = res.consts.M_I;
    j["constants"]["S_I"] = res.consts.S_I;
    j["constants"]["c_VI"] = res.consts.c_VI;
    j["summary"]["x"] = c.x_list;
    j["summary"]["mean_count"] = res.mean_count;
    j["summary"]["var_count"] = res.var_count;
    j["summary"]["theory_mean"] = res.theory_mean;
    for (std::size_t ki = 0; ki < c.k_list.size(); ++ki) {
        const std::string key = "k" + std::to_string(c.k_list[ki]);
        const double v = res.ks_by_k[ki];
        if (std::isfinite(v))
            j["summary"]["ks"][key] = v;
        else
            j["summary"]["ks"][key] = nullptr;
    }
    detail::atomic_write(fs::path(dir) / "experiment.json", j.dump(2) + "\n");

    std::string taus = "replica,k,tau\r\n";
    for (int r = 0; r < c.replicas; ++r)
        for (std::size_t ki = 0; ki < c.k_list.size(); ++ki)
            if (std::isfinite(res.taus[r][ki]))
                taus += std::to_string(r) + "," + std::to_string(c.k_list[ki]) + "," +
                        detail::fmt17(res.taus[r][ki]) + "\r\n";
    detail::atomic_write(fs::path(dir) / "taus.csv", taus);

    std::string exc = "x,mean_count,var_count,theory_mean\r\n";
    for (std::size_t xi = 0; xi < c.x_list.size(); ++xi)
        exc += detail::fmt17(c.x_list[xi]) + "," + detail::fmt17(res.mean_count[xi]) + "," +
               detail::fmt17(res.var_count[xi]) + "," + detail::fmt17(res.theory_mean[xi]) +
               "\r\n";
    detail::atomic_write(fs::path(dir) / "exceedance.csv", exc);
}

inline void write_cdf_files(const ExperimentResult& res, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const ExperimentConfig& c = res.config;
    for (std::size_t ki = 0; ki < c.k_list.size(); ++ki) {
        const int k = c.k_list[ki];
        std::vector<double> sample;
        for (int r = 0; r < c.replicas; ++r)
            if (std::isfinite(res.taus[r][ki])) sample.push_back(res.taus[r][ki]);
        std::sort(sample.begin(), sample.end());
        const GammaGumbel law(k, res.consts.c_VI);
        std::string body = "tau,empirical_cdf,theory_cdf\r\n";
        for (std::size_t i = 0; i < sample.size(); ++i)
            body += detail::fmt17(sample[i]) + "," +
                    detail::fmt17((double)(i + 1) / (double)sample.size()) + "," +
                    detail::fmt17(gamma_gumbel_cdf(law, sample[i])) + "\r\n";
        detail::atomic_write(fs::path(dir) / ("cdf_k" + std::to_string(k) + ".csv"), body);
    }
}

struct SweepRow {
    int n = 0;
    double ks1 = 0.0;
};

// Reruns the experiment along n_list and reports the KS distance of tau_1 to
// its gamma-Gumbel limit, the convergence monitor for the limit law.
inline std::vector<SweepRow> convergence_sweep(const ExperimentConfig& base,
                                               const std::vector<int>& n_list) {
    if (n_list.empty()) throw std::invalid_argument("sweep wants a nonempty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1]))
            throw std::invalid_argument("sweep n list must increase strictly");
    std::vector<SweepRow> table;
    for (int n : n_list) {
        ExperimentConfig c = base;
        c.n = n;
        if (std::find(c.k_list.begin(), c.k_list.end(), 1) == c.k_list.end())
            c.k_list.insert(c.k_list.begin(), 1);
        const ExperimentResult r = run_experiment(c);
        std::size_t ki = 0;
        while (c.k_list[ki] != 1) ++ki;
        table.push_back({n, r.ks_by_k[ki]});
    }
    return table;
}

} // namespace bulkgap
