#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "infodemic/cascade.hpp"
#include "infodemic/date.hpp"
#include "infodemic/graph.hpp"

namespace infodemic {

/// The seven possible-viewer classes, by the combination of categories seen:
///   x1 corrective only, x2 misinformation only, x3 sold-out only,
///   x4 corrective+misinformation, x5 corrective+sold-out,
///   x6 misinformation+sold-out, x7 all three.
enum class ExposureClass : std::uint8_t { X1 = 0, X2, X3, X4, X5, X6, X7 };

inline constexpr std::size_t kExposureClasses = 7;

using ExposureCounts = std::array<std::uint64_t, kExposureClasses>;

/// Class of a user who saw the given (non-empty) combination of categories.
ExposureClass classify(bool corrective, bool misinformation, bool soldout);

struct DailyExposure {
    Date day;
    ExposureCounts counts{};

    bool operator==(const DailyExposure&) const = default;
};

/// Consecutive days, one row each.
struct ExposureMatrix {
    std::vector<DailyExposure> rows;

    std::size_t days() const { return rows.size(); }
    bool operator==(const ExposureMatrix&) const = default;
};

struct ExposureOptions {
    /// Classify each counted user by every category seen up to and including the day,
    /// instead of only the categories seen that day. Either way a user is only counted on
    /// days with at least one exposure.
    bool cumulative = false;
    /// Count the posting/retweeting account itself as a viewer of its own action.
    bool include_authors = true;
    /// Worker threads for per-day work (0 = all cores).
    unsigned threads = 1;
};

/// Per-class counts for one day. A user is exposed to a tweet on a day when the tweet is
/// posted or retweeted that day by an account the user follows (or, with
/// include_authors, by the user). Each exposed user lands in exactly one class.
DailyExposure daily_exposures(const SocialGraph& graph, std::span<const Cascade> cascades,
                              Date day, const ExposureOptions& options = {});

/// daily_exposures for every day of the period. Throws DomainError for an empty period.
ExposureMatrix exposure_matrix(const SocialGraph& graph, std::span<const Cascade> cascades,
                               const DateRange& period, const ExposureOptions& options = {});

/// Column sums.
ExposureCounts total_exposures(const ExposureMatrix& matrix);

/// Distinct users exposed on the day (sum of the class counts).
std::uint64_t exposed_users(const DailyExposure& row);

void write_exposure_csv(std::ostream& out, const ExposureMatrix& matrix);
/// Rows must be consecutive days.
ExposureMatrix read_exposure_csv(std::istream& in);

}  // namespace infodemic
