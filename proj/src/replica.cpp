#include "infodemic/replica.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "infodemic/error.hpp"
#include "infodemic/rng.hpp"

namespace infodemic {
namespace {

struct DayProfile {
    double centre;  // day offset within the period
    double spread;
};

Date draw_day(rng::Rng& r, const DateRange& period, DayProfile p) {
    std::vector<double> cdf(period.size());
    double acc = 0.0;
    for (std::size_t d = 0; d < cdf.size(); ++d) {
        const double z = (static_cast<double>(d) - p.centre) / p.spread;
        acc += std::exp(-0.5 * z * z);
        cdf[d] = acc;
    }
    const double u = r.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return period.at(static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1)));
}

SeedTweet make_seed(TweetId id, UserId author, TweetCategory cat, Date day, rng::Rng& r) {
    return {id, author, cat, day, encode_seq(day, r.bits())};
}

double ratio_x1_x2(const ExposureCounts& t) {
    return t[1] ? static_cast<double>(t[0]) / static_cast<double>(t[1])
                : std::numeric_limits<double>::infinity();
}

}  // namespace

FittedSalesModel reference_model(const std::vector<double>& means, double population_scale) {
    std::vector<std::vector<double>> basis(kExposureClasses,
                                           std::vector<double>(kExposureClasses, 0.0));
    std::vector<double> a(kExposureClasses);
    for (std::size_t j = 0; j < kExposureClasses; ++j) {
        basis[j][j] = 1.0;
        a[j] = kCalibrationImpacts[j] * population_scale;
    }
    return assemble_model(means, basis, a, kCalibrationIntercept);
}

Replica make_replica(const ReplicaConfig& cfg) {
    if (cfg.period.size() == 0) throw ConfigError("replica period is empty");
    for (std::size_t pool : {cfg.corrective_pool, cfg.soldout_pool})
        if (pool == 0 || pool > cfg.n_users)
            throw ConfigError("author pool must be within the user count");
    Replica rep;
    rep.graph = generate_graph({cfg.n_users, cfg.degree, rng::derive(cfg.seed, {1})});
    const SocialGraph& g = rep.graph;
    rep.population_scale = kCalibrationPopulation / static_cast<double>(cfg.n_users);

    std::vector<UserId> by_followers(g.n_users());
    std::iota(by_followers.begin(), by_followers.end(), UserId{0});
    std::stable_sort(by_followers.begin(), by_followers.end(), [&](UserId a, UserId b) {
        return g.in_degree(a) > g.in_degree(b);
    });

    rng::Rng r(rng::derive(cfg.seed, {2}));
    TweetId next_id = 1;
    auto popular_author = [&](std::size_t pool) { return by_followers[r.below(pool)]; };
    const DayProfile misinfo_days_profile{cfg.misinfo_peak, 2.0};
    const DayProfile corrective_days{cfg.corrective_peak, 2.5};
    const DayProfile soldout_days{cfg.soldout_peak, 3.0};

    // Corrective and sold-out cascades do not depend on the misinformation calibration.
    JointSimulationSpec others;
    others.horizon_days = cfg.horizon_days;
    others.rng_seed = rng::derive(cfg.seed, {3});
    for (std::size_t i = 0; i < cfg.corrective_tweets; ++i) {
        others.seeds.push_back(make_seed(next_id++, popular_author(cfg.corrective_pool), TweetCategory::Corrective,
                                         draw_day(r, cfg.period, corrective_days), r));
        others.rt_rates.push_back(cfg.corrective_rt_rate);
    }
    for (std::size_t i = 0; i < cfg.soldout_tweets; ++i) {
        others.seeds.push_back(make_seed(next_id++, popular_author(cfg.soldout_pool), TweetCategory::SoldOut,
                                         draw_day(r, cfg.period, soldout_days), r));
        others.rt_rates.push_back(cfg.soldout_rt_rate);
    }
    const std::vector<Cascade> fixed = simulate_joint(g, others);

    std::vector<Date> misinfo_days;
    std::vector<std::uint64_t> misinfo_keys;
    for (std::size_t i = 0; i < cfg.misinfo_tweets; ++i) {
        misinfo_days.push_back(draw_day(r, cfg.period, misinfo_days_profile));
        misinfo_keys.push_back(r.bits());
    }
    const TweetId misinfo_first_id = next_id;

    // Misinformation authors are picked by follower count; the target count is rescaled
    // until the corrective-only / misinformation-only exposure ratio is near the target.
    auto build = [&](double target_followers) {
        std::vector<UserId> authors;
        rng::Rng pick(rng::derive(cfg.seed, {4}));
        // Users ordered by closeness of their follower count to the target.
        std::vector<UserId> order = by_followers;
        std::stable_sort(order.begin(), order.end(), [&](UserId a, UserId b) {
            return std::abs(std::log((g.in_degree(a) + 1.0) / (target_followers + 1.0))) <
                   std::abs(std::log((g.in_degree(b) + 1.0) / (target_followers + 1.0)));
        });
        const std::size_t window = std::min<std::size_t>(order.size(), 4 * cfg.misinfo_tweets);
        std::vector<UserId> candidates(order.begin(), order.begin() + window);
        for (std::size_t i = 0; i < cfg.misinfo_tweets && !candidates.empty(); ++i) {
            const auto j = pick.below(candidates.size());
            authors.push_back(candidates[j]);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(j));
        }
        JointSimulationSpec spec;
        spec.horizon_days = cfg.horizon_days;
        spec.rng_seed = rng::derive(cfg.seed, {5});
        for (std::size_t i = 0; i < authors.size(); ++i) {
            spec.seeds.push_back({misinfo_first_id + i, authors[i], TweetCategory::Misinformation,
                                  misinfo_days[i], encode_seq(misinfo_days[i], misinfo_keys[i])});
            spec.rt_rates.push_back(cfg.misinfo_rt_rate);
        }
        std::vector<Cascade> all = simulate_joint(g, spec);
        all.insert(all.end(), fixed.begin(), fixed.end());
        make_unique_seqs(all);
        return all;
    };

    double target = 50.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<Cascade> all = build(target);
        ExposureMatrix m = exposure_matrix(g, all, cfg.period);
        const double ratio = ratio_x1_x2(total_exposures(m));
        const double err = std::abs(std::log(ratio / cfg.target_x1_x2_ratio));
        spdlog::debug("replica calibration: target followers {:.1f} -> x1/x2 {:.1f}", target, ratio);
        if (err < best_err) {
            best_err = err;
            rep.cascades = std::move(all);
            rep.baseline = std::move(m);
            rep.x1_x2_ratio = ratio;
        }
        if (err < 0.02 || !std::isfinite(ratio)) break;
        target *= std::clamp(ratio / cfg.target_x1_x2_ratio, 0.25, 4.0);
    }

    std::vector<double> means(kExposureClasses, 0.0);
    for (const auto& row : rep.baseline.rows)
        for (std::size_t j = 0; j < kExposureClasses; ++j)
            means[j] += static_cast<double>(row.counts[j]);
    for (double& m : means) m /= static_cast<double>(rep.baseline.days());
    rep.reference = reference_model(means, rep.population_scale);

    rep.sales = predict(rep.reference, rep.baseline);
    rng::Rng noise(rng::derive(cfg.seed, {6}));
    for (auto& p : rep.sales.points) p.index += cfg.sales_noise * noise.normal();
    return rep;
}

}  // namespace infodemic
