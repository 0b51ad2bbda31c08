#include "infodemic/exposure.hpp"

#include <bit>
#include <istream>
#include <ostream>

#include "infodemic/bitset.hpp"
#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"
#include "infodemic/parallel.hpp"

namespace infodemic {

ExposureClass classify(bool c, bool m, bool s) {
    const int code = (c ? 1 : 0) | (m ? 2 : 0) | (s ? 4 : 0);
    switch (code) {
        case 1: return ExposureClass::X1;
        case 2: return ExposureClass::X2;
        case 4: return ExposureClass::X3;
        case 3: return ExposureClass::X4;
        case 5: return ExposureClass::X5;
        case 6: return ExposureClass::X6;
        case 7: return ExposureClass::X7;
        default: throw DomainError("classify: user saw no category");
    }
}

namespace {

using CategorySets = std::array<UserBitset, 3>;

std::size_t index(TweetCategory c) { return static_cast<std::size_t>(c); }

/// Actions (posting or retweeting accounts) per category for days [first, first+n).
struct DayActions {
    std::vector<std::array<std::vector<UserId>, 3>> by_day;
};

DayActions collect_actions(std::span<const Cascade> cascades, Date first, std::size_t n) {
    DayActions a;
    a.by_day.resize(n);
    auto put = [&](Date d, TweetCategory cat, UserId actor) {
        if (d < first) return;
        const auto off = static_cast<std::size_t>(d - first);
        if (off < n) a.by_day[off][index(cat)].push_back(actor);
    };
    for (const auto& c : cascades) {
        put(c.seed.day, c.seed.category, c.seed.author);
        for (const auto& e : c.events) put(e.day, c.seed.category, e.user);
    }
    return a;
}

void mark(const SocialGraph& g, std::span<const UserId> actors, bool include_self,
          UserBitset& out) {
    for (UserId a : actors) {
        if (include_self) out.set(a);
        for (UserId f : g.followers(a)) out.set(f);
    }
}

/// Counts the partition of (c | m | s) by the category bits in (cc, mm, ss).
ExposureCounts count_classes(const UserBitset& c, const UserBitset& m, const UserBitset& s,
                             const UserBitset& cc, const UserBitset& mm, const UserBitset& ss) {
    ExposureCounts out{};
    const std::size_t words = c.word_count();
    const auto* pc = c.words();
    const auto* pm = m.words();
    const auto* ps = s.words();
    const auto* qc = cc.words();
    const auto* qm = mm.words();
    const auto* qs = ss.words();
    for (std::size_t k = 0; k < words; ++k) {
        const std::uint64_t any = pc[k] | pm[k] | ps[k];
        if (!any) continue;
        const std::uint64_t C = qc[k] & any, M = qm[k] & any, S = qs[k] & any;
        out[0] += std::popcount(C & ~M & ~S);
        out[1] += std::popcount(~C & M & ~S);
        out[2] += std::popcount(~C & ~M & S);
        out[3] += std::popcount(C & M & ~S);
        out[4] += std::popcount(C & ~M & S);
        out[5] += std::popcount(~C & M & S);
        out[6] += std::popcount(C & M & S);
    }
    return out;
}

}  // namespace

ExposureMatrix exposure_matrix(const SocialGraph& g, std::span<const Cascade> cascades,
                               const DateRange& period, const ExposureOptions& opt) {
    const std::size_t n_days = period.size();
    if (n_days == 0) throw DomainError("exposure period is empty");
    const std::size_t n = g.n_users();

    ExposureMatrix result;
    result.rows.resize(n_days);
    for (std::size_t d = 0; d < n_days; ++d) result.rows[d].day = period.at(d);

    if (!opt.cumulative) {
        const DayActions actions = collect_actions(cascades, period.first, n_days);
        parallel_for(n_days, opt.threads, [&](std::size_t d) {
            CategorySets sets{UserBitset(n), UserBitset(n), UserBitset(n)};
            for (std::size_t k = 0; k < 3; ++k)
                mark(g, actions.by_day[d][k], opt.include_authors, sets[k]);
            const auto& [m, c, s] = sets;
            result.rows[d].counts = count_classes(c, m, s, c, m, s);
        });
        return result;
    }

    // Cumulative classification needs the history before the period as well.
    Date earliest = period.first;
    for (const auto& c : cascades) earliest = std::min(earliest, c.seed.day);
    const std::size_t lead = static_cast<std::size_t>(period.first - earliest);
    const DayActions actions = collect_actions(cascades, earliest, lead + n_days);

    std::vector<CategorySets> daily(lead + n_days);
    parallel_for(daily.size(), opt.threads, [&](std::size_t d) {
        daily[d] = {UserBitset(n), UserBitset(n), UserBitset(n)};
        for (std::size_t k = 0; k < 3; ++k)
            mark(g, actions.by_day[d][k], opt.include_authors, daily[d][k]);
    });
    CategorySets history{UserBitset(n), UserBitset(n), UserBitset(n)};
    for (std::size_t d = 0; d < daily.size(); ++d) {
        for (std::size_t k = 0; k < 3; ++k) history[k] |= daily[d][k];
        if (d < lead) continue;
        const auto& [m, c, s] = daily[d];
        const auto& [hm, hc, hs] = history;
        result.rows[d - lead].counts = count_classes(c, m, s, hc, hm, hs);
    }
    return result;
}

DailyExposure daily_exposures(const SocialGraph& g, std::span<const Cascade> cascades, Date day,
                              const ExposureOptions& opt) {
    return exposure_matrix(g, cascades, DateRange{day, day}, opt).rows.front();
}

ExposureCounts total_exposures(const ExposureMatrix& matrix) {
    ExposureCounts t{};
    for (const auto& row : matrix.rows)
        for (std::size_t j = 0; j < kExposureClasses; ++j) t[j] += row.counts[j];
    return t;
}

std::uint64_t exposed_users(const DailyExposure& row) {
    std::uint64_t s = 0;
    for (auto c : row.counts) s += c;
    return s;
}

void write_exposure_csv(std::ostream& out, const ExposureMatrix& matrix) {
    out << "day,x1,x2,x3,x4,x5,x6,x7\n";
    for (const auto& row : matrix.rows) {
        out << row.day.iso();
        for (auto c : row.counts) out << ',' << c;
        out << '\n';
    }
}

ExposureMatrix read_exposure_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> f;
    ExposureMatrix m;
    bool first = true;
    while (reader.next(f)) {
        if (std::exchange(first, false) && !f.empty() && f[0] == "day") continue;
        if (f.size() != 1 + kExposureClasses)
            throw ParseError("expected day,x1,...,x7", reader.line());
        DailyExposure row;
        try {
            row.day = Date::parse(f[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), reader.line());
        }
        for (std::size_t j = 0; j < kExposureClasses; ++j)
            row.counts[j] = csv::parse_u64(f[j + 1], reader.line());
        if (!m.rows.empty() && row.day != m.rows.back().day + 1)
            throw ParseError("exposure rows must be consecutive days", reader.line());
        m.rows.push_back(row);
    }
    return m;
}

}  // namespace infodemic
