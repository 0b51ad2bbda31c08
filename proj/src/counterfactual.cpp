#include "infodemic/counterfactual.hpp"

#include <cmath>
#include <ostream>

#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"
#include "infodemic/parallel.hpp"
#include "infodemic/rng.hpp"

namespace infodemic {
namespace {

// Sub-stream tags, so that the draws of one purpose never depend on another.
constexpr std::uint64_t kMisinfoStream = 1;
constexpr std::uint64_t kKeepStream = 2;
constexpr std::uint64_t kSweepStream = 3;

bool is(const Cascade& c, TweetCategory cat) { return c.seed.category == cat; }

std::size_t corrective_events(std::span<const Cascade> cascades) {
    std::size_t n = 0;
    for (const auto& c : cascades)
        if (is(c, TweetCategory::Corrective)) n += c.events.size();
    return n;
}

std::vector<Cascade> prepare(const SocialGraph& g, std::span<const Cascade> cascades,
                             std::uint64_t seed, const ScenarioOptions& o) {
    if (o.misinfo_rt_rate)
        return resimulate_misinformation(g, cascades, *o.misinfo_rt_rate, o.horizon_days,
                                         rng::derive(seed, {kMisinfoStream}));
    return {cascades.begin(), cascades.end()};
}

TrialResult finish(const SocialGraph& g, const std::vector<Cascade>& cs,
                   const FittedSalesModel& model, const ScenarioOptions& o,
                   std::size_t original_corrective, std::uint64_t seed) {
    TrialResult r = evaluate(g, cs, model, o);
    r.seed = seed;
    r.corrective_retained =
        original_corrective ? static_cast<double>(r.retweets[1]) / original_corrective : 0.0;
    return r;
}

}  // namespace

TrialResult evaluate(const SocialGraph& g, std::span<const Cascade> cascades,
                     const FittedSalesModel& model, const ScenarioOptions& o) {
    TrialResult r;
    r.exposures = exposure_matrix(g, cascades, o.period, o.exposure);
    r.predicted = predict(model, r.exposures);
    r.sum_index = sum_index(r.predicted);
    r.totals = total_exposures(r.exposures);
    for (const auto& c : cascades)
        r.retweets[static_cast<std::size_t>(c.seed.category)] += c.events.size();
    const std::size_t corr = r.retweets[static_cast<std::size_t>(TweetCategory::Corrective)];
    r.corrective_retained = corr ? 1.0 : 0.0;
    return r;
}

std::vector<Cascade> resimulate_misinformation(const SocialGraph& g,
                                               std::span<const Cascade> cascades, double rt_rate,
                                               int horizon_days, std::uint64_t seed) {
    JointSimulationSpec spec;
    spec.horizon_days = horizon_days;
    spec.rng_seed = seed;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < cascades.size(); ++i) {
        if (!is(cascades[i], TweetCategory::Misinformation)) continue;
        spec.seeds.push_back(cascades[i].seed);
        spec.rt_rates.push_back(rt_rate);
        slots.push_back(i);
    }
    std::vector<Cascade> out(cascades.begin(), cascades.end());
    if (slots.empty()) return out;
    auto sim = simulate_joint(g, spec);
    for (std::size_t j = 0; j < slots.size(); ++j) out[slots[j]] = std::move(sim[j]);
    make_unique_seqs(out);
    return out;
}

TrialResult reduce_corrective(const SocialGraph& g, std::span<const Cascade> cascades,
                              const FittedSalesModel& model, double retention,
                              std::uint64_t seed, const ScenarioOptions& o) {
    if (!(retention >= 0.0 && retention <= 1.0))
        throw DomainError("retention must be in [0, 1]");
    std::vector<Cascade> cs = prepare(g, cascades, seed, o);
    for (auto& c : cs) {
        if (!is(c, TweetCategory::Corrective)) continue;
        const auto keep = sample_keep_set(c, retention, rng::derive(seed, {kKeepStream, c.seed.id}));
        c = prune_cascade(g, c, keep);
    }
    return finish(g, cs, model, o, corrective_events(cascades), seed);
}

TrialResult guideline_experiment(const SocialGraph& g, std::span<const Cascade> cascades,
                                 const FittedSalesModel& model, std::uint64_t seed,
                                 const ScenarioOptions& o) {
    std::vector<Cascade> cs = prepare(g, cascades, seed, o);
    std::vector<Cascade> misinfo;
    for (const auto& c : cs)
        if (is(c, TweetCategory::Misinformation)) misinfo.push_back(c);
    const std::vector<Seq> first_seen = first_exposure_seq(g, misinfo);
    for (auto& c : cs) {
        if (!is(c, TweetCategory::Corrective)) continue;
        std::vector<UserId> keep;
        for (const auto& e : c.events)
            if (first_seen[e.user] < e.seq) keep.push_back(e.user);
        c = prune_cascade(g, c, keep);
    }
    return finish(g, cs, model, o, corrective_events(cascades), seed);
}

double compare(double baseline_sum, double variant_sum) {
    if (baseline_sum == 0.0) throw DomainError("cannot compare against a zero baseline");
    return (baseline_sum - variant_sum) / baseline_sum;
}

std::pair<double, double> mean_stddev(std::span<const double> v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
    return rng::derive(base_seed, {trial});
}

// -- What-if table -----------------------------------------------------------------------

WhatIfTable whatif_table(const SocialGraph& g, std::span<const Cascade> cascades,
                         const FittedSalesModel& model, const WhatIfConfig& cfg) {
    if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
    for (double r : cfg.retentions)
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("retention must be in [0, 1]");

    WhatIfTable table;
    ScenarioOptions base = cfg.scenario;
    base.misinfo_rt_rate.reset();
    table.baseline_sum = evaluate(g, cascades, model, base).sum_index;

    if (cfg.guideline) table.rows.push_back({"guideline", 0.0, {}, 0.0, 0.0});
    for (double r : cfg.retentions) table.rows.push_back({"retention", r, {}, 0.0, 0.0});

    const std::size_t n_rows = table.rows.size();
    std::vector<double> sums(n_rows * cfg.trials);
    std::vector<double> retained(n_rows * cfg.trials);
    ScenarioOptions scenario = cfg.scenario;
    scenario.exposure.threads = 1;
    parallel_for(sums.size(), cfg.threads, [&](std::size_t i) {
        const std::size_t row = i / cfg.trials;
        const std::size_t t = i % cfg.trials;
        const std::uint64_t seed = trial_seed(cfg.base_seed, t);
        const WhatIfRow& spec = table.rows[row];
        const TrialResult r =
            spec.condition == "guideline"
                ? guideline_experiment(g, cascades, model, seed, scenario)
                : reduce_corrective(g, cascades, model, spec.retention, seed, scenario);
        sums[i] = r.sum_index;
        retained[i] = r.corrective_retained;
    });
    for (std::size_t row = 0; row < n_rows; ++row) {
        auto& r = table.rows[row];
        r.trial_sums.assign(sums.begin() + row * cfg.trials, sums.begin() + (row + 1) * cfg.trials);
        std::tie(r.mean, r.stddev) = mean_stddev(r.trial_sums);
        if (r.condition == "guideline") {
            double s = 0.0;
            for (std::size_t t = 0; t < cfg.trials; ++t) s += retained[row * cfg.trials + t];
            r.retention = s / static_cast<double>(cfg.trials);
        }
    }
    return table;
}

void write_whatif_trials_csv(std::ostream& out, const WhatIfTable& table) {
    out << "condition,retention,trial,sum_sales_index\n";
    for (const auto& r : table.rows)
        for (std::size_t t = 0; t < r.trial_sums.size(); ++t)
            out << r.condition << ',' << csv::format_double(r.retention) << ',' << t << ','
                << csv::format_double(r.trial_sums[t]) << '\n';
}

void write_whatif_summary_csv(std::ostream& out, const WhatIfTable& table) {
    out << "condition,retention,mean,stddev,trials,reduction\n";
    out << "baseline,1,"  << csv::format_double(table.baseline_sum) << ",0,1,0\n";
    for (const auto& r : table.rows) {
        out << r.condition << ',' << csv::format_double(r.retention) << ','
            << csv::format_double(r.mean) << ',' << csv::format_double(r.stddev) << ','
            << r.trial_sums.size() << ',';
        if (table.baseline_sum != 0.0) out << csv::format_double(compare(table.baseline_sum, r.mean));
        out << '\n';
    }
}

// -- Rate sweep ----------------------------------------------------------------------------

const SweepCell& SweepGrid::cell(double m, double c) const {
    for (const auto& x : cells)
        if (x.misinfo_rate == m && x.corrective_rate == c) return x;
    throw DomainError("no sweep cell for the requested rates");
}

TrialResult sweep_trial(const SocialGraph& g, std::span<const Cascade> cascades,
                        const FittedSalesModel& model, double misinfo_rate,
                        double corrective_rate, std::uint64_t seed, const SweepConfig& cfg) {
    std::vector<Cascade> fixed;
    JointSimulationSpec spec;
    spec.horizon_days = cfg.scenario.horizon_days;
    spec.corrective_blocks_misinformation = true;
    spec.rng_seed = rng::derive(seed, {kSweepStream});
    for (const auto& c : cascades) {
        switch (c.seed.category) {
            case TweetCategory::Misinformation:
                spec.seeds.push_back(c.seed);
                spec.rt_rates.push_back(misinfo_rate);
                break;
            case TweetCategory::Corrective:
                if (cfg.replay_corrective) {
                    const double retention =
                        std::min(1.0, corrective_rate / cfg.reference_corrective_rate);
                    const auto keep = sample_keep_set(
                        c, retention, rng::derive(seed, {kKeepStream, c.seed.id}));
                    fixed.push_back(prune_cascade(g, c, keep));
                } else {
                    spec.seeds.push_back(c.seed);
                    spec.rt_rates.push_back(corrective_rate);
                }
                break;
            case TweetCategory::SoldOut:
                fixed.push_back(c);
                break;
        }
    }
    spec.fixed = fixed;
    std::vector<Cascade> all = simulate_joint(g, spec);
    const std::size_t original_corrective = corrective_events(cascades);
    all.insert(all.end(), std::make_move_iterator(fixed.begin()),
               std::make_move_iterator(fixed.end()));
    TrialResult r = evaluate(g, all, model, cfg.scenario);
    r.seed = seed;
    r.corrective_retained =
        original_corrective ? static_cast<double>(r.retweets[1]) / original_corrective : 0.0;
    return r;
}

SweepGrid sweep(const SocialGraph& g, std::span<const Cascade> cascades,
                const FittedSalesModel& model, const SweepConfig& cfg) {
    if (cfg.misinfo_rates.empty() || cfg.corrective_rates.empty())
        throw ConfigError("sweep needs at least one misinformation and one corrective rate");
    if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
    for (double r : cfg.misinfo_rates)
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("misinformation rate must be in [0, 1]");
    for (double r : cfg.corrective_rates)
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("corrective rate must be in [0, 1]");
    if (cfg.replay_corrective && !(cfg.reference_corrective_rate > 0.0))
        throw ConfigError("reference corrective rate must be positive");

    SweepGrid grid;
    for (double m : cfg.misinfo_rates)
        for (double c : cfg.corrective_rates) {
            SweepCell cell;
            cell.misinfo_rate = m;
            cell.corrective_rate = c;
            cell.trial_sums.resize(cfg.trials);
            cell.trial_totals.resize(cfg.trials);
            grid.cells.push_back(std::move(cell));
        }

    SweepConfig local = cfg;
    local.scenario.exposure.threads = 1;
    parallel_for(grid.cells.size() * cfg.trials, cfg.threads, [&](std::size_t i) {
        SweepCell& cell = grid.cells[i / cfg.trials];
        const std::size_t t = i % cfg.trials;
        const TrialResult r = sweep_trial(g, cascades, model, cell.misinfo_rate,
                                          cell.corrective_rate, trial_seed(cfg.base_seed, t), local);
        cell.trial_sums[t] = r.sum_index;
        cell.trial_totals[t] = r.totals;
    });
    for (auto& cell : grid.cells) std::tie(cell.mean, cell.stddev) = mean_stddev(cell.trial_sums);
    return grid;
}

void write_sweep_trials_csv(std::ostream& out, const SweepGrid& grid) {
    out << "misinfo_rate,corrective_rate,trial,sum_sales_index\n";
    for (const auto& c : grid.cells)
        for (std::size_t t = 0; t < c.trial_sums.size(); ++t)
            out << csv::format_double(c.misinfo_rate) << ',' << csv::format_double(c.corrective_rate)
                << ',' << t << ',' << csv::format_double(c.trial_sums[t]) << '\n';
}

void write_sweep_summary_csv(std::ostream& out, const SweepGrid& grid) {
    out << "misinfo_rate,corrective_rate,mean,stddev,trials\n";
    for (const auto& c : grid.cells)
        out << csv::format_double(c.misinfo_rate) << ',' << csv::format_double(c.corrective_rate)
            << ',' << csv::format_double(c.mean) << ',' << csv::format_double(c.stddev) << ','
            << c.trial_sums.size() << '\n';
}

void write_sweep_exposure_csv(std::ostream& out, const SweepGrid& grid) {
    out << "misinfo_rate,corrective_rate,x1,x2,x3,x4,x5,x6,x7\n";
    for (const auto& c : grid.cells) {
        out << csv::format_double(c.misinfo_rate) << ',' << csv::format_double(c.corrective_rate);
        for (std::size_t j = 0; j < kExposureClasses; ++j) {
            double s = 0.0;
            for (const auto& t : c.trial_totals) s += static_cast<double>(t[j]);
            out << ',' << csv::format_double(c.trial_totals.empty() ? 0.0 : s / c.trial_totals.size());
        }
        out << '\n';
    }
}

}  // namespace infodemic
