#include "infodemic/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>

#include <spdlog/spdlog.h>

#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"
#include "infodemic/rng.hpp"

namespace infodemic {

SocialGraph SocialGraph::from_edges(std::size_t n_users, std::vector<Edge> edges,
                                    std::vector<std::string> external_ids, BuildStats* stats) {
    if (!external_ids.empty() && external_ids.size() != n_users)
        throw DomainError("external id table size does not match user count");

    BuildStats local;
    const auto before = edges.size();
    std::erase_if(edges, [](const Edge& e) { return e.follower == e.followee; });
    local.self_edges_dropped = before - edges.size();
    for (const Edge& e : edges) {
        if (e.follower >= n_users || e.followee >= n_users)
            throw DomainError("edge references user outside [0, n_users)");
    }
    std::sort(edges.begin(), edges.end());
    const auto unique_end = std::unique(edges.begin(), edges.end());
    local.duplicate_edges_dropped = static_cast<std::size_t>(edges.end() - unique_end);
    edges.erase(unique_end, edges.end());
    if (stats) *stats = local;

    SocialGraph g;
    g.n_users_ = n_users;
    g.follow_offsets_.assign(n_users + 1, 0);
    g.follower_offsets_.assign(n_users + 1, 0);
    for (const Edge& e : edges) {
        ++g.follow_offsets_[e.follower + 1];
        ++g.follower_offsets_[e.followee + 1];
    }
    std::partial_sum(g.follow_offsets_.begin(), g.follow_offsets_.end(), g.follow_offsets_.begin());
    std::partial_sum(g.follower_offsets_.begin(), g.follower_offsets_.end(),
                     g.follower_offsets_.begin());

    g.follow_targets_.resize(edges.size());
    g.follower_sources_.resize(edges.size());
    std::vector<std::size_t> cursor(g.follower_offsets_.begin(), g.follower_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        // edges are sorted by follower, so follow lists come out sorted and contiguous;
        // followers of each followee are appended in ascending follower order.
        g.follow_targets_[i] = edges[i].followee;
        g.follower_sources_[cursor[edges[i].followee]++] = edges[i].follower;
    }

    g.external_ids_ = std::move(external_ids);
    g.id_index_.reserve(g.external_ids_.size());
    for (UserId u = 0; u < g.external_ids_.size(); ++u) {
        if (!g.id_index_.emplace(g.external_ids_[u], u).second)
            throw DomainError("duplicate external id '" + g.external_ids_[u] + "'");
    }
    return g;
}

std::string SocialGraph::external_id(UserId u) const {
    return external_ids_.empty() ? std::to_string(u) : external_ids_[u];
}

std::optional<UserId> SocialGraph::find(std::string_view external) const {
    if (external_ids_.empty()) {
        std::uint64_t v = 0;
        try {
            v = csv::parse_u64(external, 0);
        } catch (const ParseError&) {
            return std::nullopt;
        }
        if (v >= n_users_ || std::to_string(v) != external) return std::nullopt;
        return static_cast<UserId>(v);
    }
    const auto it = id_index_.find(std::string(external));
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Edge> SocialGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(n_edges());
    for (UserId u = 0; u < n_users_; ++u)
        for (UserId v : follows(u)) out.push_back({u, v});
    return out;
}

std::span<const UserId> followers_of(const SocialGraph& graph, UserId u) {
    if (u >= graph.n_users())
        throw DomainError("user " + std::to_string(u) + " out of range (n_users = " +
                          std::to_string(graph.n_users()) + ")");
    return graph.followers(u);
}

EdgeLoadResult load_edges(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    std::vector<std::string> ids;
    std::unordered_map<std::string, UserId> index;
    std::vector<Edge> edges;

    auto intern = [&](const std::string& ext, std::size_t line) {
        if (ext.empty()) throw ParseError("empty user id", line);
        auto [it, fresh] = index.emplace(ext, static_cast<UserId>(ids.size()));
        if (fresh) {
            if (ids.size() >= UINT32_MAX) throw ParseError("too many users", line);
            ids.push_back(ext);
        }
        return it->second;
    };

    bool first = true;
    while (reader.next(fields)) {
        if (first) {
            first = false;
            if (fields.size() == 2 && fields[0] == "follower_id" && fields[1] == "followee_id")
                continue;
        }
        if (fields.size() != 2)
            throw ParseError("expected 2 fields (follower_id,followee_id), got " +
                                 std::to_string(fields.size()),
                             reader.line());
        const UserId a = intern(fields[0], reader.line());
        const UserId b = intern(fields[1], reader.line());
        edges.push_back({a, b});
    }

    SocialGraph::BuildStats stats;
    EdgeLoadResult result;
    const std::size_t n = ids.size();
    result.graph = SocialGraph::from_edges(n, std::move(edges), std::move(ids), &stats);
    result.self_edges_dropped = stats.self_edges_dropped;
    result.duplicate_edges_dropped = stats.duplicate_edges_dropped;
    if (stats.self_edges_dropped)
        spdlog::warn("dropped {} self-follow edge(s)", stats.self_edges_dropped);
    return result;
}

void write_edges(std::ostream& out, const SocialGraph& graph) {
    out << "follower_id,followee_id\n";
    for (UserId u = 0; u < graph.n_users(); ++u) {
        const std::string from = graph.external_id(u);
        for (UserId v : graph.follows(u)) out << from << ',' << graph.external_id(v) << '\n';
    }
}

void validate(const GraphGenConfig& config) {
    if (config.n_users == 0) return;
    if (config.n_users > UINT32_MAX) throw ConfigError("n_users exceeds 32-bit user id space");
    if (const auto* pl = std::get_if<PowerLawDegree>(&config.degree_model)) {
        if (!(pl->exponent > 1.0) || !std::isfinite(pl->exponent))
            throw ConfigError("power-law exponent must be > 1");
        if (pl->min_degree < 1) throw ConfigError("min_degree must be >= 1");
        if (pl->min_degree > pl->max_degree) throw ConfigError("min_degree > max_degree");
        if (pl->max_degree >= config.n_users)
            throw ConfigError("max_degree must be < n_users");
    } else {
        const auto& fd = std::get<FixedDegree>(config.degree_model);
        if (fd.degree >= config.n_users) throw ConfigError("fixed degree must be < n_users");
    }
}

namespace {

/// Inverse-CDF sampler for the discrete truncated power law.
class PowerLawSampler {
public:
    explicit PowerLawSampler(const PowerLawDegree& m) : min_(m.min_degree) {
        cdf_.resize(m.max_degree - m.min_degree + 1);
        double acc = 0;
        for (std::size_t i = 0; i < cdf_.size(); ++i) {
            acc += std::pow(static_cast<double>(min_ + i), -m.exponent);
            cdf_[i] = acc;
        }
        for (double& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
    }

    std::uint32_t operator()(rng::Rng& r) const {
        const double u = r.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return min_ + static_cast<std::uint32_t>(it - cdf_.begin());
    }

private:
    std::uint32_t min_;
    std::vector<double> cdf_;
};

/// Vose alias table for O(1) weighted draws.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t n = weights.size();
        prob_.resize(n);
        alias_.resize(n);
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            small.pop_back();
            const auto l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
        for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
    }

    std::uint32_t operator()(rng::Rng& r) const {
        const auto i = static_cast<std::uint32_t>(r.below(prob_.size()));
        return r.uniform() < prob_[i] ? i : alias_[i];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

}  // namespace

SocialGraph generate_graph(const GraphGenConfig& config) {
    validate(config);
    const std::size_t n = config.n_users;
    if (n == 0) return SocialGraph{};

    std::vector<std::uint32_t> degree(n);
    std::vector<double> popularity(n);
    if (const auto* pl = std::get_if<PowerLawDegree>(&config.degree_model)) {
        const PowerLawSampler sample(*pl);
        rng::Rng deg_rng(rng::derive(config.seed, {1}));
        rng::Rng pop_rng(rng::derive(config.seed, {2}));
        for (auto& d : degree) d = sample(deg_rng);
        for (auto& w : popularity) w = sample(pop_rng);
    } else {
        std::fill(degree.begin(), degree.end(), std::get<FixedDegree>(config.degree_model).degree);
        std::fill(popularity.begin(), popularity.end(), 1.0);
    }

    const AliasTable pick(popularity);
    std::vector<Edge> edges;
    edges.reserve(std::accumulate(degree.begin(), degree.end(), std::size_t{0}));
    std::vector<UserId> chosen;
    std::vector<std::uint8_t> mark(n, 0);

    for (UserId u = 0; u < n; ++u) {
        rng::Rng r(rng::derive(config.seed, {3, u}));
        const std::size_t want = degree[u];
        chosen.clear();
        mark[u] = 1;
        if (want * 4 <= n) {
            // Rejection: duplicates and self are re-drawn. Cheap while want is small
            // relative to n.
            while (chosen.size() < want) {
                const UserId v = pick(r);
                if (!mark[v]) {
                    mark[v] = 1;
                    chosen.push_back(v);
                }
            }
        } else {
            // Dense case: weighted sampling without replacement by exponential keys
            // (Efraimidis-Spirakis), one full pass.
            using Keyed = std::pair<double, UserId>;
            std::priority_queue<Keyed, std::vector<Keyed>, std::greater<>> best;
            for (UserId v = 0; v < n; ++v) {
                if (v == u) continue;
                double x;
                do x = r.uniform();
                while (x <= 0.0);
                const double key = std::log(x) / popularity[v];
                if (best.size() < want) {
                    best.emplace(key, v);
                } else if (key > best.top().first) {
                    best.pop();
                    best.emplace(key, v);
                }
            }
            while (!best.empty()) {
                chosen.push_back(best.top().second);
                best.pop();
            }
        }
        mark[u] = 0;
        for (UserId v : chosen) {
            mark[v] = 0;
            edges.push_back({u, v});
        }
    }
    return SocialGraph::from_edges(n, std::move(edges));
}

}  // namespace infodemic
