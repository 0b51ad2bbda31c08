#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "infodemic/cascade.hpp"
#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"

namespace infodemic {

namespace {

UserId lookup_user(const SocialGraph& g, const std::string& ext, std::size_t line) {
    const auto u = g.find(ext);
    if (!u) throw ParseError("unknown user id '" + ext + "'", line);
    return *u;
}

bool is_header(const std::vector<std::string>& f, std::initializer_list<const char*> names) {
    if (f.size() != names.size()) return false;
    std::size_t i = 0;
    for (const char* n : names)
        if (f[i++] != n) return false;
    return true;
}

}  // namespace

std::vector<Cascade> read_cascades(std::istream& tweets, std::istream& retweets,
                                   const SocialGraph& g) {
    std::vector<Cascade> cascades;
    std::unordered_map<TweetId, std::size_t> by_id;
    std::vector<std::string> f;

    csv::Reader tr(tweets);
    bool first = true;
    while (tr.next(f)) {
        if (std::exchange(first, false) && is_header(f, {"tweet_id", "author_id", "category", "day"}))
            continue;
        if (f.size() != 4) throw ParseError("expected tweet_id,author_id,category,day", tr.line());
        SeedTweet s;
        s.id = csv::parse_u64(f[0], tr.line());
        s.author = lookup_user(g, f[1], tr.line());
        const auto cat = parse_category(f[2]);
        if (!cat) throw ParseError("unknown category '" + f[2] + "'", tr.line());
        s.category = *cat;
        try {
            s.day = Date::parse(f[3]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), tr.line());
        }
        if (!by_id.emplace(s.id, cascades.size()).second)
            throw ParseError("duplicate tweet id " + f[0], tr.line());
        cascades.push_back({s, {}});
    }

    struct Raw {
        RetweetEvent event;
        std::uint64_t given_seq;
        std::size_t line;
    };
    std::vector<Raw> raw;
    csv::Reader rr(retweets);
    first = true;
    while (rr.next(f)) {
        if (std::exchange(first, false) && is_header(f, {"user_id", "tweet_id", "day", "seq"}))
            continue;
        if (f.size() != 4) throw ParseError("expected user_id,tweet_id,day,seq", rr.line());
        RetweetEvent e;
        e.user = lookup_user(g, f[0], rr.line());
        e.tweet = csv::parse_u64(f[1], rr.line());
        if (!by_id.contains(e.tweet))
            throw ParseError("retweet of unknown tweet " + f[1], rr.line());
        try {
            e.day = Date::parse(f[2]);
        } catch (const ParseError& ex) {
            throw ParseError(ex.what(), rr.line());
        }
        if (e.day < cascades[by_id[e.tweet]].seed.day)
            throw ParseError("retweet dated before its tweet", rr.line());
        raw.push_back({e, csv::parse_u64(f[3], rr.line()), rr.line()});
    }
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Raw& a, const Raw& b) { return a.given_seq < b.given_seq; });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].given_seq == raw[i - 1].given_seq)
            throw ParseError("duplicate seq " + std::to_string(raw[i].given_seq), raw[i].line);
        if (raw[i].event.day < raw[i - 1].event.day)
            throw ParseError("seq order contradicts day order", raw[i].line);
    }

    // Re-encode: per day, seeds (file order) then retweets (seq order), spread evenly over
    // the day's key space so they interleave fairly with simulated events.
    std::map<int, std::vector<Seq*>> slots;
    for (auto& c : cascades) slots[c.seed.day.serial()].push_back(&c.seed.seq);

    std::size_t dropped = 0;
    std::vector<std::unordered_map<UserId, bool>> seen(cascades.size());
    for (auto& r : raw) {
        const std::size_t ci = by_id[r.event.tweet];
        if (!seen[ci].emplace(r.event.user, true).second) {
            ++dropped;
            continue;
        }
        cascades[ci].events.push_back(r.event);
    }
    for (auto& c : cascades)
        for (auto& e : c.events) slots[e.day.serial()].push_back(&e.seq);
    for (auto& [day, list] : slots) {
        const double width = static_cast<double>(kSeqKeyMask) / static_cast<double>(list.size());
        for (std::size_t i = 0; i < list.size(); ++i)
            *list[i] = encode_seq(Date::from_serial(day),
                                  static_cast<std::uint64_t>((static_cast<double>(i) + 0.5) * width));
    }
    if (dropped) spdlog::warn("dropped {} repeated retweet(s) of the same tweet by the same user", dropped);
    return cascades;
}

void write_tweets(std::ostream& out, std::span<const Cascade> cascades, const SocialGraph& g) {
    out << "tweet_id,author_id,category,day\n";
    std::vector<const SeedTweet*> seeds;
    for (const auto& c : cascades) seeds.push_back(&c.seed);
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const SeedTweet* a, const SeedTweet* b) { return a->seq < b->seq; });
    for (const SeedTweet* s : seeds)
        out << s->id << ',' << g.external_id(s->author) << ',' << to_string(s->category) << ','
            << s->day.iso() << '\n';
}

void write_retweets(std::ostream& out, std::span<const Cascade> cascades, const SocialGraph& g) {
    out << "user_id,tweet_id,day,seq\n";
    std::vector<const RetweetEvent*> events;
    for (const auto& c : cascades)
        for (const auto& e : c.events) events.push_back(&e);
    std::stable_sort(events.begin(), events.end(),
                     [](const RetweetEvent* a, const RetweetEvent* b) { return a->seq < b->seq; });
    for (const RetweetEvent* e : events)
        out << g.external_id(e->user) << ',' << e->tweet << ',' << e->day.iso() << ',' << e->seq
            << '\n';
}

}  // namespace infodemic
