#include "infodemic/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"

namespace infodemic {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(std::string_view name) {
    for (const auto& k : config_keys())
        if (k.name == name) return &k;
    return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"graph", "", "follower edge CSV"},
        {"tweets", "", "seed tweet CSV"},
        {"retweets", "", "retweet event CSV"},
        {"sales", "", "sales CSV"},
        {"model", "", "fitted model JSON"},
        {"exposure", "", "exposure matrix CSV"},
        {"out", ".", "output directory"},
        {"period", "2020-02-21..2020-03-10", "analysis window FROM..TO"},
        {"k", "4", "retained principal components"},
        {"drop_nonsignificant", "false", "zero components with p > alpha when predicting"},
        {"alpha", "0.05", "significance level for drop_nonsignificant"},
        {"cumulative_exposure", "false", "classify viewers by everything seen so far"},
        {"include_authors", "true", "count acting accounts as viewers of their own posts"},
        {"retention", "1,0.8,0.6,0.4,0.2,0", "corrective retweeter retention levels"},
        {"guideline", "true", "include the misinformation-gated guideline condition"},
        {"misinfo_rate", "", "whatif: one rate or 'replay' (default 0.00186); sweep: rate list (default 0,0.00186,0.01,0.02,0.03,0.04,0.05)"},
        {"corrective_rate", "0.0079,0.0063,0.0047,0.0032,0.0016,0", "corrective retweet rate(s)"},
        {"reference_corrective_rate", "0.0079", "observed corrective rate (retention 1)"},
        {"replay_corrective", "false", "sweep: thin the observed corrective cascades"},
        {"horizon_days", "10", "days after the seed during which retweets can occur"},
        {"trials", "10", "trials per condition"},
        {"seed", "0", "base random seed"},
        {"threads", "0", "worker threads (0 = all cores)"},
        {"n_users", "100000", "gen-graph/replica: users"},
        {"exponent", "2.5", "gen-graph: power-law exponent"},
        {"min_degree", "20", "gen-graph: minimum out-degree"},
        {"max_degree", "400", "gen-graph: maximum out-degree"},
        {"fixed_degree", "", "gen-graph: use this constant out-degree instead"},
        {"category", "corrective", "simulate: category of generated seed tweets"},
        {"seed_tweets", "10", "simulate: number of seed tweets"},
        {"rt_rate", "0.0079", "simulate: retweet probability"},
    };
    return keys;
}

RunConfig RunConfig::parse(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
        const std::string key(trim(t.substr(0, eq)));
        if (!find_key(key)) throw ConfigError("line " + std::to_string(n) + ": unknown key '" + key + "'");
        if (cfg.values_.contains(key))
            throw ConfigError("line " + std::to_string(n) + ": key '" + key + "' given twice");
        cfg.values_[key] = std::string(trim(t.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return parse(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void RunConfig::set(std::string_view key, std::string value) {
    if (!find_key(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
    values_.insert_or_assign(std::string(key), std::move(value));
}

std::optional<std::string> RunConfig::get(std::string_view key) const {
    const ConfigKey* k = find_key(key);
    if (!k) throw ConfigError("unknown config key '" + std::string(key) + "'");
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    if (!k->default_value.empty()) return std::string(k->default_value);
    return std::nullopt;
}

std::string RunConfig::require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ConfigError("missing required setting '" + std::string(key) + "'");
    return *v;
}

double RunConfig::get_double(std::string_view key) const {
    const std::string v = require(key);
    try {
        return csv::parse_double(v, 0);
    } catch (const ParseError&) {
        throw ConfigError("setting '" + std::string(key) + "' is not a number: " + v);
    }
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
    const std::string v = require(key);
    try {
        return csv::parse_u64(v, 0);
    } catch (const ParseError&) {
        throw ConfigError("setting '" + std::string(key) + "' is not a non-negative integer: " + v);
    }
}

bool RunConfig::get_bool(std::string_view key) const {
    const std::string v = require(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("setting '" + std::string(key) + "' is not a boolean: " + v);
}

std::vector<double> RunConfig::get_doubles(std::string_view key) const {
    const std::string v = require(key);
    std::vector<double> out;
    for (const auto& f : csv::split(v)) {
        try {
            out.push_back(csv::parse_double(trim(f), 0));
        } catch (const ParseError&) {
            throw ConfigError("setting '" + std::string(key) + "' is not a number list: " + v);
        }
    }
    return out;
}

void RunConfig::write_header(std::ostream& out, std::string_view command) const {
    out << "# command: " << command << '\n';
    for (const auto& [k, v] : values_) out << "# " << k << " = " << v << '\n';
}

}  // namespace infodemic
