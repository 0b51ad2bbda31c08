#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "infodemic/date.hpp"
#include "infodemic/graph.hpp"

namespace infodemic {

enum class TweetCategory : std::uint8_t { Misinformation = 0, Corrective = 1, SoldOut = 2 };

inline constexpr std::array<TweetCategory, 3> kCategories = {
    TweetCategory::Misinformation, TweetCategory::Corrective, TweetCategory::SoldOut};

std::string_view to_string(TweetCategory c);
/// Accepts `misinformation`, `corrective`, `soldout`.
std::optional<TweetCategory> parse_category(std::string_view s);

using TweetId = std::uint64_t;

/// Global event order. The upper bits hold the day, the lower 40 bits a within-day key, so
/// comparing sequence numbers orders events by day first.
using Seq = std::uint64_t;

inline constexpr int kSeqKeyBits = 40;
inline constexpr Seq kSeqKeyMask = (Seq{1} << kSeqKeyBits) - 1;
inline constexpr Seq kSeqMax = UINT64_MAX;

/// Sequence number for `key` (only the low 40 bits are used) within `day`.
Seq encode_seq(Date day, std::uint64_t key);
Date seq_day(Seq seq);

struct SeedTweet {
    TweetId id = 0;
    UserId author = 0;
    TweetCategory category = TweetCategory::Corrective;
    Date day;
    Seq seq = 0;

    bool operator==(const SeedTweet&) const = default;
};

struct RetweetEvent {
    UserId user = 0;
    TweetId tweet = 0;
    Date day;
    Seq seq = 0;

    bool operator==(const RetweetEvent&) const = default;
};

/// One seed tweet and its retweets in sequence order, at most one per user.
struct Cascade {
    SeedTweet seed;
    std::vector<RetweetEvent> events;

    /// Retweeting users in event order.
    std::vector<UserId> retweeters() const;

    bool operator==(const Cascade&) const = default;
};

/// Checks the cascade invariants against the graph; throws DomainError.
void validate(const Cascade& cascade, const SocialGraph& graph);

/// Users who could have seen the tweet through events with seq < seq_limit: the author
/// and the author's followers, plus every earlier retweeter and their followers.
/// With include_self = false the acting accounts themselves are only included when they
/// are also followers of another acting account. Sorted ascending.
std::vector<UserId> visible_set(const SocialGraph& graph, const Cascade& cascade, Seq seq_limit,
                                bool include_self = true);

/// Counterfactual pruning. Events are restricted to the users in `keep`; then every event
/// whose user had visibility in the original cascade but no longer has it (because the
/// upstream retweets were removed) is dropped, transitively. Events whose user was never
/// visible through the observed graph (exposure from outside the data) are kept as long as
/// their user is in `keep`. Throws DomainError when `keep` names a non-retweeter.
Cascade prune_cascade(const SocialGraph& graph, const Cascade& cascade,
                      std::span<const UserId> keep);

/// round(retention * |retweeters|) retweeters, chosen as a prefix of one seeded random
/// permutation so that smaller retention levels give subsets of larger ones.
std::vector<UserId> sample_keep_set(const Cascade& cascade, double retention, std::uint64_t seed);

/// Day-synchronous retweet process. On the seed day the author's followers are exposed;
/// each user, on the first day they are exposed, retweets with probability rt_rate and the
/// retweet is posted the following day, exposing that user's followers. Only days before
/// seed.day + horizon_days produce events. The retweet decision for (tweet, user) is a
/// fixed uniform draw, so runs at different rates with the same seed are coupled.
Cascade simulate_cascade(const SocialGraph& graph, const SeedTweet& seed, double rt_rate,
                         int horizon_days, std::uint64_t rng_seed);

// -- Joint simulation -------------------------------------------------------------------

struct JointSimulationSpec {
    /// Seeds to simulate, with the per-seed retweet probability.
    std::vector<SeedTweet> seeds;
    std::vector<double> rt_rates;
    /// Cascades replayed as-is; they contribute exposure but are not resimulated.
    std::span<const Cascade> fixed;
    int horizon_days = 10;
    /// Users already exposed to corrective content do not retweet misinformation.
    bool corrective_blocks_misinformation = false;
    std::uint64_t rng_seed = 0;
};

/// Simulates all seeds together, day by day, so that interactions between categories can
/// be expressed. Returns the simulated cascades in the order of spec.seeds.
std::vector<Cascade> simulate_joint(const SocialGraph& graph, const JointSimulationSpec& spec);

// -- Dataset-level helpers --------------------------------------------------------------

/// Makes sequence numbers unique across all cascades by bumping ties (seeds sort before
/// events at equal seq). Within-cascade order is preserved.
void make_unique_seqs(std::vector<Cascade>& cascades);

/// Per user, the smallest seq at which any cascade in `cascades` became visible to that
/// user (kSeqMax when never).
std::vector<Seq> first_exposure_seq(const SocialGraph& graph, std::span<const Cascade> cascades,
                                    bool include_self = true);

// -- CSV I/O ----------------------------------------------------------------------------

/// Reads `tweet_id,author_id,category,day` and `user_id,tweet_id,day,seq`. Ids are mapped
/// through the graph's external id table. Within each day, seeds are ordered before
/// retweets (in file order) and retweets by their seq column; the resulting order is
/// re-encoded into day-keyed sequence numbers.
std::vector<Cascade> read_cascades(std::istream& tweets, std::istream& retweets,
                                   const SocialGraph& graph);

void write_tweets(std::ostream& out, std::span<const Cascade> cascades, const SocialGraph& graph);
void write_retweets(std::ostream& out, std::span<const Cascade> cascades,
                    const SocialGraph& graph);

}  // namespace infodemic
