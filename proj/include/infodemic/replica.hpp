#pragma once

// Synthetic stand-in for the proprietary event data: a follower graph, three families of
// retweet cascades over a 19-day window, and a daily sales index. Sizes, rates and
// exposure ratios are calibrated to the published summary statistics of the 2020
// toilet-paper episode; everything else is synthetic.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "infodemic/cascade.hpp"
#include "infodemic/date.hpp"
#include "infodemic/exposure.hpp"
#include "infodemic/graph.hpp"
#include "infodemic/salesmodel.hpp"

namespace infodemic {

/// Per-viewer impacts on the sales index for the real population, x1..x7.
inline constexpr ImpactVector kCalibrationImpacts = {5.35e-8, 624.00e-8, 44.80e-8, 309.00e-8,
                                                     79.20e-8, 2.88e-8, 43.10e-8};
inline constexpr double kCalibrationIntercept = 0.9919;
/// Accounts behind the calibration impacts.
inline constexpr double kCalibrationPopulation = 97'430'525.0;

/// Linear sales model with the calibration impacts, each multiplied by
/// `population_scale` (real accounts represented by one simulated account), centred on
/// `means`. Its components are the raw exposure columns, so per_viewer_impacts returns
/// the scaled impacts directly.
FittedSalesModel reference_model(const std::vector<double>& means, double population_scale);

struct ReplicaConfig {
    std::size_t n_users = 100'000;
    PowerLawDegree degree{2.5, 20, 400};
    DateRange period{Date::from_ymd(2020, 2, 21), Date::from_ymd(2020, 3, 10)};
    std::size_t misinfo_tweets = 8;
    std::size_t corrective_tweets = 229;
    std::size_t soldout_tweets = 42;
    double misinfo_rt_rate = 0.00186;
    double corrective_rt_rate = 0.0079;
    double soldout_rt_rate = 0.004;
    int horizon_days = 10;
    /// Authors of corrective (sold-out) tweets are drawn from this many most-followed users.
    std::size_t corrective_pool = 1000;
    std::size_t soldout_pool = 5000;
    /// Day offsets within the period around which seed tweets of each category cluster.
    double misinfo_peak = 5.0;
    double corrective_peak = 7.5;
    double soldout_peak = 8.5;
    /// Target for total corrective-only over total misinformation-only exposure.
    double target_x1_x2_ratio = 357.0;
    /// Standard deviation of the noise added to the reference model's daily prediction.
    double sales_noise = 0.14;
    std::uint64_t seed = 2020;
};

struct Replica {
    SocialGraph graph;
    std::vector<Cascade> cascades;
    ExposureMatrix baseline;
    SalesSeries sales;
    FittedSalesModel reference;
    double population_scale = 1.0;
    double x1_x2_ratio = 0.0;
};

/// Deterministic in the config.
Replica make_replica(const ReplicaConfig& config);

}  // namespace infodemic
