#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace infodemic::csv {

/// Line-oriented reader for the toolkit's plain CSV files: comma separated, no quoting,
/// LF or CRLF line endings, `#` comment lines and blank lines ignored.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next data record, split into fields. Returns false at end of input.
    bool next(std::vector<std::string>& fields);
    /// 1-based line number of the record most recently returned.
    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view line);

/// Parses a full-width unsigned/signed integer or double; throws ParseError tagged with `line`.
std::uint64_t parse_u64(std::string_view field, std::size_t line);
double parse_double(std::string_view field, std::size_t line);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Writes to `<path>.tmp` and renames onto `path` on commit(); the temp file is removed if
/// the writer is destroyed without committing.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path path);
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;
    ~AtomicFile();

    std::ostream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

}  // namespace infodemic::csv
