#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infodemic/cascade.hpp"
#include "infodemic/date.hpp"
#include "infodemic/exposure.hpp"
#include "infodemic/graph.hpp"
#include "infodemic/salesmodel.hpp"

namespace infodemic {

/// Settings shared by every experiment.
struct ScenarioOptions {
    DateRange period;
    ExposureOptions exposure;
    int horizon_days = 10;
    /// When set, misinformation cascades are regenerated from their seed tweets at this
    /// retweet rate instead of being replayed from the data.
    std::optional<double> misinfo_rt_rate;
};

/// Outcome of one experimental run.
struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    ExposureMatrix exposures;
    SalesSeries predicted;
    double sum_index = 0.0;
    ExposureCounts totals{};
    /// Retweet events per category, indexed by TweetCategory.
    std::array<std::size_t, 3> retweets{};
    /// Corrective retweets kept, as a fraction of those in the input (0 when there were none).
    double corrective_retained = 0.0;
};

/// Exposure, prediction and sum for a fixed set of cascades.
TrialResult evaluate(const SocialGraph& graph, std::span<const Cascade> cascades,
                     const FittedSalesModel& model, const ScenarioOptions& options);

/// Replaces each misinformation cascade by a fresh simulation from its seed tweet.
std::vector<Cascade> resimulate_misinformation(const SocialGraph& graph,
                                               std::span<const Cascade> cascades, double rt_rate,
                                               int horizon_days, std::uint64_t seed);

/// Keeps a random `retention` share of every corrective cascade's retweeters (nested
/// across retention levels for one seed), prunes the events that lose visibility, and
/// evaluates. With retention 1 and no misinformation resimulation this is the baseline.
TrialResult reduce_corrective(const SocialGraph& graph, std::span<const Cascade> cascades,
                              const FittedSalesModel& model, double retention,
                              std::uint64_t seed, const ScenarioOptions& options);

/// Keeps a corrective retweet only when its user had already been exposed to
/// misinformation before the retweet, then prunes and evaluates.
TrialResult guideline_experiment(const SocialGraph& graph, std::span<const Cascade> cascades,
                                 const FittedSalesModel& model, std::uint64_t seed,
                                 const ScenarioOptions& options);

/// (baseline - variant) / baseline. Throws DomainError for a zero baseline.
double compare(double baseline_sum, double variant_sum);

// -- What-if table -----------------------------------------------------------------------

struct WhatIfConfig {
    ScenarioOptions scenario;
    std::vector<double> retentions{1.0, 0.8, 0.6, 0.4, 0.2, 0.0};
    bool guideline = true;
    std::size_t trials = 10;
    std::uint64_t base_seed = 0;
    unsigned threads = 1;
};

struct WhatIfRow {
    std::string condition;  // "guideline" or "retention"
    double retention = 0.0; // mean retained corrective share for the guideline row
    std::vector<double> trial_sums;
    double mean = 0.0;
    double stddev = 0.0;
};

struct WhatIfTable {
    double baseline_sum = 0.0;
    std::vector<WhatIfRow> rows;  // guideline first (if requested), then retentions in order
};

/// Runs every condition for every trial. Trial t uses seed derive(base_seed, t) in all
/// conditions, so conditions are compared on common random numbers.
WhatIfTable whatif_table(const SocialGraph& graph, std::span<const Cascade> cascades,
                         const FittedSalesModel& model, const WhatIfConfig& config);

void write_whatif_trials_csv(std::ostream& out, const WhatIfTable& table);
/// condition,retention,mean,stddev,trials,reduction
void write_whatif_summary_csv(std::ostream& out, const WhatIfTable& table);

// -- Rate sweep ----------------------------------------------------------------------------

struct SweepConfig {
    ScenarioOptions scenario;
    std::vector<double> misinfo_rates{0.0, 0.00186, 0.01, 0.02, 0.03, 0.04, 0.05};
    std::vector<double> corrective_rates{0.0079, 0.0063, 0.0047, 0.0032, 0.0016, 0.0};
    std::size_t trials = 10;
    std::uint64_t base_seed = 0;
    /// Replay the data's corrective cascades thinned to corrective_rate / reference rate
    /// instead of simulating them.
    bool replay_corrective = false;
    double reference_corrective_rate = 0.0079;
    unsigned threads = 1;
};

struct SweepCell {
    double misinfo_rate = 0.0;
    double corrective_rate = 0.0;
    std::vector<double> trial_sums;
    std::vector<ExposureCounts> trial_totals;
    double mean = 0.0;
    double stddev = 0.0;
};

struct SweepGrid {
    std::vector<SweepCell> cells;  // misinfo-major, in config order

    /// Throws DomainError when the cell is not in the grid.
    const SweepCell& cell(double misinfo_rate, double corrective_rate) const;
};

/// Seed for trial t of any cell: derive(base_seed, t). Sharing it across cells couples
/// the cells, so per-trial outcomes move monotonically with the rates.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

/// One sweep run: misinformation and corrective cascades simulated jointly from the
/// data's seed tweets (corrective exposure blocks misinformation retweets), sold-out
/// cascades replayed, then evaluated.
TrialResult sweep_trial(const SocialGraph& graph, std::span<const Cascade> cascades,
                        const FittedSalesModel& model, double misinfo_rate,
                        double corrective_rate, std::uint64_t seed, const SweepConfig& config);

SweepGrid sweep(const SocialGraph& graph, std::span<const Cascade> cascades,
                const FittedSalesModel& model, const SweepConfig& config);

/// misinfo_rate,corrective_rate,trial,sum_sales_index
void write_sweep_trials_csv(std::ostream& out, const SweepGrid& grid);
/// misinfo_rate,corrective_rate,mean,stddev,trials
void write_sweep_summary_csv(std::ostream& out, const SweepGrid& grid);
/// misinfo_rate,corrective_rate,x1..x7 (mean per-class exposure totals over trials)
void write_sweep_exposure_csv(std::ostream& out, const SweepGrid& grid);

/// Sample mean and standard deviation (n - 1; 0 for a single value).
std::pair<double, double> mean_stddev(std::span<const double> values);

}  // namespace infodemic
