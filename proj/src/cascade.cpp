#include "infodemic/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_set>

#include "infodemic/bitset.hpp"
#include "infodemic/error.hpp"
#include "infodemic/rng.hpp"

namespace infodemic {

namespace {

constexpr int kSeqDayOffset = 1 << 22;  // keeps pre-1970 dates positive

/// Marks `actor` (optionally) and its followers into `seen`.
void expose(const SocialGraph& g, UserId actor, bool include_self, UserBitset& seen) {
    if (include_self) seen.set(actor);
    for (UserId f : g.followers(actor)) seen.set(f);
}

}  // namespace

std::string_view to_string(TweetCategory c) {
    switch (c) {
        case TweetCategory::Misinformation: return "misinformation";
        case TweetCategory::Corrective: return "corrective";
        case TweetCategory::SoldOut: return "soldout";
    }
    return "?";
}

std::optional<TweetCategory> parse_category(std::string_view s) {
    for (auto c : kCategories)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

Seq encode_seq(Date day, std::uint64_t key) {
    const auto d = static_cast<std::uint64_t>(day.serial() + kSeqDayOffset);
    return (d << kSeqKeyBits) | (key & kSeqKeyMask);
}

Date seq_day(Seq seq) {
    return Date::from_serial(static_cast<int>(seq >> kSeqKeyBits) - kSeqDayOffset);
}

std::vector<UserId> Cascade::retweeters() const {
    std::vector<UserId> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.user);
    return out;
}

void validate(const Cascade& c, const SocialGraph& g) {
    if (c.seed.author >= g.n_users()) throw DomainError("seed author outside graph");
    std::unordered_set<UserId> seen;
    Seq prev = c.seed.seq;
    for (const auto& e : c.events) {
        if (e.user >= g.n_users()) throw DomainError("retweeter outside graph");
        if (e.tweet != c.seed.id) throw DomainError("event references a different tweet");
        if (e.seq <= prev) throw DomainError("events not strictly ordered after the seed");
        if (e.day < c.seed.day) throw DomainError("retweet dated before its seed tweet");
        if (!seen.insert(e.user).second)
            throw DomainError("user " + std::to_string(e.user) + " retweets twice");
        prev = e.seq;
    }
}

std::vector<UserId> visible_set(const SocialGraph& g, const Cascade& c, Seq seq_limit,
                                bool include_self) {
    UserBitset seen(g.n_users());
    expose(g, c.seed.author, include_self, seen);
    for (const auto& e : c.events) {
        if (e.seq >= seq_limit) break;
        expose(g, e.user, include_self, seen);
    }
    std::vector<UserId> out;
    out.reserve(seen.count());
    seen.for_each([&](std::size_t u) { out.push_back(static_cast<UserId>(u)); });
    return out;
}

Cascade prune_cascade(const SocialGraph& g, const Cascade& c, std::span<const UserId> keep) {
    std::unordered_set<UserId> keep_set(keep.begin(), keep.end());
    {
        std::unordered_set<UserId> retweeters;
        for (const auto& e : c.events) retweeters.insert(e.user);
        for (UserId u : keep_set)
            if (!retweeters.contains(u))
                throw DomainError("keep set contains user " + std::to_string(u) +
                                  " who did not retweet tweet " + std::to_string(c.seed.id));
    }

    // An event is anchored when its user could see the tweet in the original cascade.
    // Only anchored events can lose visibility. A single pass in seq order reaches the
    // fixpoint because visibility at an event depends only on earlier events.
    UserBitset original(g.n_users());
    UserBitset pruned(g.n_users());
    expose(g, c.seed.author, true, original);
    expose(g, c.seed.author, true, pruned);

    Cascade out{c.seed, {}};
    for (const auto& e : c.events) {
        const bool anchored = original.test(e.user);
        expose(g, e.user, true, original);
        if (!keep_set.contains(e.user)) continue;
        if (anchored && !pruned.test(e.user)) continue;
        out.events.push_back(e);
        expose(g, e.user, true, pruned);
    }
    return out;
}

std::vector<UserId> sample_keep_set(const Cascade& c, double retention, std::uint64_t seed) {
    if (!(retention >= 0.0 && retention <= 1.0))
        throw DomainError("retention must be in [0, 1]");
    std::vector<UserId> order = c.retweeters();
    rng::Rng r(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(r.below(i));
        std::swap(order[i - 1], order[j]);
    }
    const auto take = static_cast<std::size_t>(
        std::llround(retention * static_cast<double>(order.size())));
    order.resize(std::min(take, order.size()));
    return order;
}

Cascade simulate_cascade(const SocialGraph& g, const SeedTweet& seed, double rt_rate,
                         int horizon_days, std::uint64_t rng_seed) {
    JointSimulationSpec spec;
    spec.seeds = {seed};
    spec.rt_rates = {rt_rate};
    spec.horizon_days = horizon_days;
    spec.rng_seed = rng_seed;
    return std::move(simulate_joint(g, spec).front());
}

std::vector<Cascade> simulate_joint(const SocialGraph& g, const JointSimulationSpec& spec) {
    const std::size_t n_tweets = spec.seeds.size();
    if (spec.rt_rates.size() != n_tweets)
        throw DomainError("simulate_joint: one retweet rate per seed required");
    for (double p : spec.rt_rates)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("retweet rate must be in [0, 1]");
    if (spec.horizon_days < 0) throw DomainError("horizon must be non-negative");
    for (const auto& s : spec.seeds)
        if (s.author >= g.n_users()) throw DomainError("seed author outside graph");

    std::vector<Cascade> out(n_tweets);
    if (n_tweets == 0) return out;
    for (std::size_t i = 0; i < n_tweets; ++i) out[i].seed = spec.seeds[i];

    const bool blocking = spec.corrective_blocks_misinformation &&
                          std::any_of(spec.seeds.begin(), spec.seeds.end(), [](const auto& s) {
                              return s.category == TweetCategory::Misinformation;
                          });

    // Acting accounts of fixed corrective cascades, by day (only needed for blocking).
    std::map<int, std::vector<UserId>> fixed_corrective_actors;
    if (blocking) {
        for (const auto& c : spec.fixed) {
            if (c.seed.category != TweetCategory::Corrective) continue;
            fixed_corrective_actors[c.seed.day.serial()].push_back(c.seed.author);
            for (const auto& e : c.events) fixed_corrective_actors[e.day.serial()].push_back(e.user);
        }
    }

    int first_day = std::numeric_limits<int>::max();
    int last_day = std::numeric_limits<int>::min();
    for (const auto& s : spec.seeds) {
        first_day = std::min(first_day, s.day.serial());
        last_day = std::max(last_day, s.day.serial() + spec.horizon_days - 1);
    }
    if (!fixed_corrective_actors.empty())
        first_day = std::min(first_day, fixed_corrective_actors.begin()->first);

    std::vector<UserBitset> exposed(n_tweets);
    std::vector<std::vector<UserId>> posting_today(n_tweets);  // retweeters posting on `day`
    std::vector<std::vector<UserId>> posting_next(n_tweets);
    std::vector<std::vector<UserId>> fresh(n_tweets);
    UserBitset corrective_seen(blocking ? g.n_users() : 0);

    auto mark_corrective = [&](UserId actor) {
        corrective_seen.set(actor);
        for (UserId f : g.followers(actor)) corrective_seen.set(f);
    };

    for (int day = first_day; day <= last_day; ++day) {
        const Date today = Date::from_serial(day);
        // 1. exposures produced by today's posts
        for (std::size_t i = 0; i < n_tweets; ++i) {
            const SeedTweet& s = spec.seeds[i];
            fresh[i].clear();
            if (s.day.serial() > day) continue;
            if (exposed[i].size() == 0) exposed[i] = UserBitset(g.n_users());
            auto reach = [&](UserId actor) {
                exposed[i].set(actor);
                for (UserId f : g.followers(actor))
                    if (exposed[i].insert(f)) fresh[i].push_back(f);
            };
            if (s.day.serial() == day) reach(s.author);
            for (UserId r : posting_today[i]) reach(r);
        }
        if (blocking) {
            if (auto it = fixed_corrective_actors.find(day); it != fixed_corrective_actors.end())
                for (UserId a : it->second) mark_corrective(a);
            for (std::size_t i = 0; i < n_tweets; ++i) {
                if (spec.seeds[i].category != TweetCategory::Corrective) continue;
                if (spec.seeds[i].day.serial() == day) mark_corrective(spec.seeds[i].author);
                for (UserId r : posting_today[i]) mark_corrective(r);
            }
        }
        // 2. retweet decisions of the newly exposed; retweets appear tomorrow
        for (std::size_t i = 0; i < n_tweets; ++i) {
            const SeedTweet& s = spec.seeds[i];
            posting_next[i].clear();
            if (day + 1 >= s.day.serial() + spec.horizon_days) continue;
            const double p = spec.rt_rates[i];
            if (p <= 0.0) continue;
            const bool is_misinfo = s.category == TweetCategory::Misinformation;
            for (UserId u : fresh[i]) {
                if (rng::coupled_uniform(spec.rng_seed, s.id, u) >= p) continue;
                if (blocking && is_misinfo && corrective_seen.test(u)) continue;
                posting_next[i].push_back(u);
            }
            const Date tomorrow = today + 1;
            for (UserId u : posting_next[i]) {
                const std::uint64_t key = rng::derive(spec.rng_seed, {s.id, u, 0x5e9});
                out[i].events.push_back({u, s.id, tomorrow, encode_seq(tomorrow, key)});
            }
        }
        std::swap(posting_today, posting_next);
    }

    for (auto& c : out) {
        std::sort(c.events.begin(), c.events.end(),
                  [](const RetweetEvent& a, const RetweetEvent& b) {
                      return a.seq != b.seq ? a.seq < b.seq : a.user < b.user;
                  });
        Seq prev = c.seed.seq;
        for (auto& e : c.events) {
            if (e.seq <= prev) e.seq = prev + 1;
            prev = e.seq;
        }
    }
    return out;
}

void make_unique_seqs(std::vector<Cascade>& cascades) {
    struct Ref {
        Seq seq;
        int kind;  // 0 = seed, 1 = event
        std::size_t cascade;
        std::size_t event;
    };
    std::vector<Ref> refs;
    for (std::size_t c = 0; c < cascades.size(); ++c) {
        refs.push_back({cascades[c].seed.seq, 0, c, 0});
        for (std::size_t e = 0; e < cascades[c].events.size(); ++e)
            refs.push_back({cascades[c].events[e].seq, 1, c, e});
    }
    std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
        return std::tie(a.seq, a.kind, a.cascade, a.event) <
               std::tie(b.seq, b.kind, b.cascade, b.event);
    });
    bool have_prev = false;
    Seq prev = 0;
    for (const Ref& r : refs) {
        Seq s = r.seq;
        if (have_prev && s <= prev) s = prev + 1;
        if ((s >> kSeqKeyBits) != (r.seq >> kSeqKeyBits))
            throw DomainError("sequence space of a day exhausted");
        Seq& slot = r.kind == 0 ? cascades[r.cascade].seed.seq
                                : cascades[r.cascade].events[r.event].seq;
        slot = s;
        prev = s;
        have_prev = true;
    }
}

std::vector<Seq> first_exposure_seq(const SocialGraph& g, std::span<const Cascade> cascades,
                                    bool include_self) {
    std::vector<Seq> first(g.n_users(), kSeqMax);
    auto touch = [&](UserId actor, Seq s) {
        if (include_self) first[actor] = std::min(first[actor], s);
        for (UserId f : g.followers(actor)) first[f] = std::min(first[f], s);
    };
    for (const auto& c : cascades) {
        touch(c.seed.author, c.seed.seq);
        for (const auto& e : c.events) touch(e.user, e.seq);
    }
    return first;
}

}  // namespace infodemic
