#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infodemic {

struct ConfigKey {
    std::string_view name;
    std::string_view default_value;  // empty: no default
    std::string_view help;
};

/// All accepted keys with their defaults.
const std::vector<ConfigKey>& config_keys();

/// `key = value` document. Blank lines and `#` comments are ignored; unknown keys and
/// repeated keys are rejected with the offending line.
class RunConfig {
public:
    static RunConfig parse(std::istream& in);
    static RunConfig load(const std::string& path);

    /// Throws ConfigError for an unknown key.
    void set(std::string_view key, std::string value);

    /// Explicitly set value, else the documented default, else nullopt.
    std::optional<std::string> get(std::string_view key) const;
    /// As get(), throwing ConfigError when the key has neither a value nor a default.
    std::string require(std::string_view key) const;

    double get_double(std::string_view key) const;
    std::uint64_t get_u64(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    /// Comma-separated numbers.
    std::vector<double> get_doubles(std::string_view key) const;

    /// Explicitly set entries, sorted by key.
    const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

    /// `# command: <name>` followed by one `# key = value` line per explicit entry.
    void write_header(std::ostream& out, std::string_view command) const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace infodemic
