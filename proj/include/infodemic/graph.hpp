#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace infodemic {

/// Dense user index, 0..n_users-1.
using UserId = std::uint32_t;

/// Directed follow relation: `follower` follows `followee` and sees the followee's posts.
struct Edge {
    UserId follower;
    UserId followee;

    auto operator<=>(const Edge&) const = default;
};

/// Immutable follower graph in compressed adjacency form, both directions.
///
/// Edge u->v means u follows v; information flows v -> u. Self-edges and duplicates are
/// removed at construction. External ids (as found in input files) are kept so output
/// can be written with the original identifiers; graphs built without an id table use
/// the decimal user index as external id.
class SocialGraph {
public:
    SocialGraph() = default;

    struct BuildStats {
        std::size_t self_edges_dropped = 0;
        std::size_t duplicate_edges_dropped = 0;
    };

    /// Builds from an edge list. Edges must reference users < n_users.
    static SocialGraph from_edges(std::size_t n_users, std::vector<Edge> edges,
                                  std::vector<std::string> external_ids = {},
                                  BuildStats* stats = nullptr);

    std::size_t n_users() const { return n_users_; }
    std::size_t n_edges() const { return follow_targets_.size(); }

    /// Users that `u` follows, ascending. Unchecked.
    std::span<const UserId> follows(UserId u) const {
        return {follow_targets_.data() + follow_offsets_[u],
                follow_targets_.data() + follow_offsets_[u + 1]};
    }
    /// Users that follow `u`, ascending. Unchecked.
    std::span<const UserId> followers(UserId u) const {
        return {follower_sources_.data() + follower_offsets_[u],
                follower_sources_.data() + follower_offsets_[u + 1]};
    }
    std::size_t out_degree(UserId u) const { return follow_offsets_[u + 1] - follow_offsets_[u]; }
    std::size_t in_degree(UserId u) const { return follower_offsets_[u + 1] - follower_offsets_[u]; }

    std::string external_id(UserId u) const;
    std::optional<UserId> find(std::string_view external) const;

    /// All edges in (follower, followee) lexicographic order.
    std::vector<Edge> edges() const;

private:
    std::size_t n_users_ = 0;
    std::vector<std::size_t> follow_offsets_{0};
    std::vector<UserId> follow_targets_;
    std::vector<std::size_t> follower_offsets_{0};
    std::vector<UserId> follower_sources_;
    std::vector<std::string> external_ids_;
    std::unordered_map<std::string, UserId> id_index_;
};

/// Followers of u; throws DomainError when u is out of range.
std::span<const UserId> followers_of(const SocialGraph& graph, UserId u);

struct EdgeLoadResult {
    SocialGraph graph;
    std::size_t self_edges_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
};

/// Reads `follower_id,followee_id` records (header line optional). External ids are
/// remapped to dense ids in first-seen order. Self-edges are dropped and counted, with
/// a warning logged.
EdgeLoadResult load_edges(std::istream& in);

/// Writes the graph as `follower_id,followee_id` CSV with a header.
void write_edges(std::ostream& out, const SocialGraph& graph);

/// Discrete power law P(k) ∝ k^-exponent on [min_degree, max_degree].
struct PowerLawDegree {
    double exponent = 2.5;
    std::uint32_t min_degree = 1;
    std::uint32_t max_degree = 100;
};

struct FixedDegree {
    std::uint32_t degree = 1;
};

struct GraphGenConfig {
    std::size_t n_users = 0;
    std::variant<PowerLawDegree, FixedDegree> degree_model = PowerLawDegree{};
    std::uint64_t seed = 0;
};

/// Throws ConfigError for infeasible settings (exponent <= 1, min > max, max >= n_users,
/// min_degree < 1).
void validate(const GraphGenConfig& config);

/// Synthetic follower graph. Each user's out-degree (number of accounts followed) is
/// drawn from the degree model; followees are drawn without replacement with probability
/// proportional to a per-user popularity weight drawn from the same degree law, which
/// yields a heavy-tailed follower count as well. Pure function of the config.
SocialGraph generate_graph(const GraphGenConfig& config);

}  // namespace infodemic
