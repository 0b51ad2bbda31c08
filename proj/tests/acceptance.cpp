// Acceptance runner: one PASS/FAIL line per criterion. `--criterion N` runs a single one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infodemic/counterfactual.hpp"
#include "infodemic/numerics.hpp"
#include "infodemic/replica.hpp"
#include "infodemic/salesmodel.hpp"
#include "oracles.hpp"

using namespace infodemic;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const std::vector<std::vector<double>> kPublishedEigenvectors = {
    {0.99, 0.00, 0.02, 0.00, 0.08, 0.00, 0.00},
    {-0.07, 0.02, -0.13, 0.04, 0.99, 0.00, 0.04},
    {-0.03, -0.08, 0.98, -0.08, 0.13, 0.00, -0.02},
    {0.00, 0.89, 0.11, 0.43, -0.02, 0.00, 0.05},
};
const std::vector<double> kPublishedCoefficients = {1.35e-7, 10.13e-7, -2.494e-7, 69.53e-7};
const ExposureCounts kPublishedTotals = {112'440'832, 311'345, 2'974'369, 251'100,
                                         5'967'030,   4'157,   124'953};
const std::array<double, 7> kPublishedGroupImpacts = {6.0236, 1.9412, 1.3339, 0.7763,
                                                      4.727,  0.0001, 0.0538};

const Replica& replica() {
    static const Replica r = make_replica(ReplicaConfig{});
    return r;
}

ScenarioOptions replica_scenario() {
    const ReplicaConfig cfg;
    ScenarioOptions s;
    s.period = cfg.period;
    s.horizon_days = cfg.horizon_days;
    s.exposure.threads = 0;
    return s;
}

Outcome impacts_from_tables() {
    const auto t0 = Clock::now();
    const auto model = assemble_model(std::vector<double>(7, 0.0), kPublishedEigenvectors,
                                      kPublishedCoefficients, 0.9919);
    const auto imp = per_viewer_impacts(model);
    const double ms = seconds_since(t0) * 1e3;
    const double e2 = std::abs(imp[1] / 624.00e-8 - 1), e4 = std::abs(imp[3] / 309.00e-8 - 1);
    return {e2 <= 0.02 && e4 <= 0.02 && ms < 1.0,
            fmt("x2 %.4e (%.2f%% off), x4 %.4e (%.2f%% off), %.3f ms", imp[1], 100 * e2, imp[3],
                100 * e4, ms)};
}

Outcome group_impacts_from_tables() {
    const auto t0 = Clock::now();
    const auto s = group_impacts(kCalibrationImpacts, kPublishedTotals);
    const double ms = seconds_since(t0) * 1e3;
    bool ok = ms < 1.0;
    std::string detail;
    for (std::size_t j = 0; j < 7; ++j) {
        const double want = kPublishedGroupImpacts[j];
        const double rel = std::abs(s[j] / want - 1);
        // x6 is published as 0.0001 and is held to an absolute bound.
        const bool good = j == 5 ? std::abs(s[j] - want) <= 1e-5 : rel <= 0.01;
        ok = ok && good;
        detail += fmt("x%zu %.4g vs %.4g%s; ", j + 1, s[j], want, good ? "" : " OUT");
    }
    return {ok, detail + fmt("%.3f ms", ms)};
}

Outcome reduction_statistic() {
    const double r = compare(18.85, 11.23);
    return {std::abs(r - 0.404) <= 0.001, fmt("compare(18.85, 11.23) = %.6f", r)};
}

Outcome guideline_ordering() {
    const auto t0 = Clock::now();
    const auto& rep = replica();
    WhatIfConfig cfg;
    cfg.scenario = replica_scenario();
    cfg.scenario.misinfo_rt_rate = 0.00186;
    cfg.retentions = {0.16, 0.0};
    cfg.trials = 10;
    cfg.base_seed = 2020;
    cfg.threads = 0;
    const auto t = whatif_table(rep.graph, rep.cascades, rep.reference, cfg);
    const double secs = seconds_since(t0);
    const double guide = t.rows[0].mean, r16 = t.rows[1].mean, r0 = t.rows[2].mean;
    return {r0 < guide && guide < r16 && secs < 120,
            fmt("retention 0: %.4f < guideline: %.4f (retained %.3f%%) < retention 0.16: %.4f; "
                "baseline %.4f; %.1f s",
                r0, guide, 100 * t.rows[0].retention, r16, t.baseline_sum, secs)};
}

SweepConfig replica_sweep_config() {
    SweepConfig cfg;
    cfg.scenario = replica_scenario();
    cfg.misinfo_rates = {0.0, 0.05};
    cfg.trials = 10;
    cfg.base_seed = 2020;
    cfg.threads = 0;
    return cfg;
}

Outcome sweep_directions() {
    const auto t0 = Clock::now();
    const auto& rep = replica();
    const auto cfg = replica_sweep_config();
    const auto grid = sweep(rep.graph, rep.cascades, rep.reference, cfg);
    const double secs = seconds_since(t0);
    // Corrective rates listed high to low; walk them low to high.
    auto series = [&](double m) {
        std::vector<double> v;
        for (auto it = cfg.corrective_rates.rbegin(); it != cfg.corrective_rates.rend(); ++it)
            v.push_back(grid.cell(m, *it).mean);
        return v;
    };
    const auto at0 = series(0.0), at5 = series(0.05);
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < at0.size(); ++i) {
        inc = inc && at0[i] > at0[i - 1];
        dec = dec && at5[i] < at5[i - 1];
    }
    std::string detail = "corrective 0..0.79%: misinfo 0% [";
    for (double v : at0) detail += fmt(" %.3f", v);
    detail += " ] misinfo 5% [";
    for (double v : at5) detail += fmt(" %.3f", v);
    detail += fmt(" ]; %.1f s", secs);
    return {inc && dec && secs < 300, detail};
}

Outcome numerics_suite() {
    using namespace numerics;
    rng::Rng r(6);
    double eig_res = 0, cov_res = 0, contrib_err = 0, ols_err = 0, r2_err = 0, t_err = 0;
    for (int rep = 0; rep < 10; ++rep) {
        Matrix data(30, 7);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 7; ++j) data(i, j) = (1 + j) * r.normal() + (j ? data(i, j - 1) : 0);
        const auto cov = covariance(data);
        const auto e = symmetric_eigen(cov);
        for (std::size_t k = 0; k < 7; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < 7; ++i) {
                double av = 0;
                for (std::size_t j = 0; j < 7; ++j) av += cov(i, j) * e.vectors(k, j);
                s += std::pow(av - e.values[k] * e.vectors(k, i), 2);
            }
            eig_res = std::max(eig_res, std::sqrt(s));
        }
        const auto p = pca(data);
        Matrix d(7, 7);
        for (std::size_t i = 0; i < 7; ++i) d(i, i) = p.eigenvalues[i];
        cov_res = std::max(cov_res, (p.eigenvectors.transpose() * d * p.eigenvectors - cov).frobenius_norm());
        contrib_err = std::max(contrib_err, std::abs(std::accumulate(p.contribution.begin(), p.contribution.end(), 0.0) - 1));

        Matrix x(25, 4);
        std::vector<double> y(25);
        const double beta[4] = {1.5, -2.0, 0.3, 7.0};
        for (std::size_t i = 0; i < 25; ++i) {
            y[i] = -0.4;
            for (std::size_t j = 0; j < 4; ++j) {
                x(i, j) = r.normal();
                y[i] += beta[j] * x(i, j);
            }
        }
        const auto f = ols(x, y);
        for (std::size_t j = 0; j < 4; ++j) ols_err = std::max(ols_err, std::abs(f.coefficients[j] - beta[j]));
        ols_err = std::max(ols_err, std::abs(f.intercept + 0.4));
        r2_err = std::max(r2_err, std::abs(f.r_squared - 1));
    }
    for (double dof : {1.0, 5.0, 14.0, 100.0})
        for (int i = 0; i < 20; ++i) {
            const double t = -5 + 10.0 * i / 19;
            t_err = std::max(t_err, std::abs(t_cdf(t, dof) - oracle::t_cdf_by_integration(t, dof)));
        }
    const bool ok = eig_res <= 1e-9 && cov_res <= 1e-9 && contrib_err <= 1e-12 && ols_err <= 1e-8 &&
                    r2_err <= 1e-12 && t_err <= 1e-8;
    return {ok, fmt("eigen residual %.1e, covariance %.1e, contribution sum %.1e, OLS %.1e, "
                    "|R2-1| %.1e, t_cdf %.1e",
                    eig_res, cov_res, contrib_err, ols_err, r2_err, t_err)};
}

Outcome brute_force_oracles() {
    rng::Rng r(7);
    const Date day0 = Date::from_ymd(2020, 2, 21);
    std::size_t prune_checks = 0, exposure_checks = 0, mismatches = 0;
    for (int g_idx = 0; g_idx < 200; ++g_idx) {
        const std::size_t n = 1 + r.below(12);
        const auto g = oracle::random_graph(n, r.uniform() * 0.6, r);
        const auto cs = oracle::random_cascades(g, 1 + r.below(4), day0, 3, r);
        for (const auto& c : cs) {
            std::vector<UserId> keep;
            for (const auto& e : c.events)
                if (r.bernoulli(0.5)) keep.push_back(e.user);
            ++prune_checks;
            if (prune_cascade(g, c, keep) != oracle::prune_fixpoint(g, c, keep)) ++mismatches;
        }
        for (int d = 0; d < 7; ++d)
            for (bool cumulative : {false, true})
                for (bool self : {false, true}) {
                    ++exposure_checks;
                    const ExposureOptions o{.cumulative = cumulative, .include_authors = self};
                    if (daily_exposures(g, cs, day0 + d, o).counts !=
                        oracle::exposures_by_user(g, cs, day0 + d, cumulative, self))
                        ++mismatches;
                }
    }
    return {mismatches == 0, fmt("%zu prune and %zu daily-exposure comparisons, %zu mismatches",
                                 prune_checks, exposure_checks, mismatches)};
}

std::string sweep_bytes(unsigned threads) {
    const auto& rep = replica();
    auto cfg = replica_sweep_config();
    cfg.misinfo_rates = {0.0, 0.02, 0.05};
    cfg.corrective_rates = {0.0079, 0.0032, 0.0};
    cfg.trials = 3;
    cfg.threads = threads;
    const auto grid = sweep(rep.graph, rep.cascades, rep.reference, cfg);
    std::ostringstream out;
    write_sweep_trials_csv(out, grid);
    write_sweep_summary_csv(out, grid);
    write_sweep_exposure_csv(out, grid);
    return out.str();
}

Outcome determinism() {
    const auto a = sweep_bytes(1), b = sweep_bytes(1), c = sweep_bytes(0);
    return {a == b && a == c, fmt("%zu bytes; rerun %s, all-cores run %s", a.size(),
                                  a == b ? "identical" : "DIFFERENT", a == c ? "identical" : "DIFFERENT")};
}

Outcome reference_values() {
    const auto& rep = replica();
    const auto model = fit(rep.baseline, rep.sales, {.k = 4});
    const auto& d = model.diagnostics;
    return {std::isfinite(d.r_squared) && std::isfinite(d.f_value),
            fmt("reference only: synthetic-replica fit R2 %.3f (published 0.939), F %.2f "
                "(published 53.49); the published values need the proprietary data",
                d.r_squared, d.f_value)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::optional<int> only;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"impact arithmetic", impacts_from_tables},
        {"group impacts", group_impacts_from_tables},
        {"reduction statistic", reduction_statistic},
        {"guideline ordering", guideline_ordering},
        {"sweep directions", sweep_directions},
        {"numerics suite", numerics_suite},
        {"brute-force oracles", brute_force_oracles},
        {"determinism", determinism},
        {"published fit statistics", reference_values},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && *only != static_cast<int>(i + 1)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
