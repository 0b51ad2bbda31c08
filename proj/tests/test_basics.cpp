#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "infodemic/bitset.hpp"
#include "infodemic/csv.hpp"
#include "infodemic/date.hpp"
#include "infodemic/error.hpp"
#include "infodemic/parallel.hpp"
#include "infodemic/rng.hpp"
#include "infodemic/run_config.hpp"

using namespace infodemic;
namespace fs = std::filesystem;

TEST(Date, ParseFormatAndArithmetic) {
    const Date d = Date::parse("2020-02-28");
    EXPECT_EQ(d.iso(), "2020-02-28");
    EXPECT_EQ((d + 1).iso(), "2020-02-29");
    EXPECT_EQ((d + 2).iso(), "2020-03-01");
    EXPECT_EQ(Date::parse("2020-03-10") - Date::parse("2020-02-21"), 18);
    EXPECT_EQ((Date::parse("2020-02-27") - 364).iso(), "2019-02-28");
    EXPECT_EQ(Date::from_serial(d.serial()), d);
}

TEST(Date, RejectsMalformed) {
    for (const char* bad : {"2020-2-28", "2020-02-30", "20200228", "2020-02-28x", ""})
        EXPECT_THROW(Date::parse(bad), ParseError) << bad;
}

TEST(DateRange, InclusiveSize) {
    const auto r = DateRange::parse("2020-02-21..2020-03-10");
    EXPECT_EQ(r.size(), 19u);
    EXPECT_TRUE(r.contains(Date::parse("2020-03-10")));
    EXPECT_FALSE(r.contains(Date::parse("2020-03-11")));
    EXPECT_EQ(r.at(7).iso(), "2020-02-28");
    EXPECT_EQ(r.str(), "2020-02-21..2020-03-10");
    EXPECT_THROW(DateRange::parse("2020-03-10..2020-02-21"), ConfigError);
    EXPECT_THROW(DateRange::parse("2020-03-10"), ParseError);
}

TEST(Csv, ReaderSkipsCommentsAndBlankLinesAndTracksLines) {
    std::istringstream in("# c\n\na,b\r\n# x\nc,d\n");
    csv::Reader r(in);
    std::vector<std::string> f;
    ASSERT_TRUE(r.next(f));
    EXPECT_EQ(f, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(r.line(), 3u);
    ASSERT_TRUE(r.next(f));
    EXPECT_EQ(r.line(), 5u);
    EXPECT_FALSE(r.next(f));
}

TEST(Csv, NumberParsing) {
    EXPECT_EQ(csv::parse_u64("18446744073709551615", 1), UINT64_MAX);
    EXPECT_THROW(csv::parse_u64("-1", 4), ParseError);
    EXPECT_THROW(csv::parse_u64("12a", 4), ParseError);
    EXPECT_DOUBLE_EQ(csv::parse_double("-1.5e-3", 1), -1.5e-3);
    EXPECT_THROW(csv::parse_double("", 2), ParseError);
    try {
        csv::parse_double("x", 9);
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 9u);
    }
}

TEST(Csv, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 6.2284e-6, -1e300, 5e-324, 18.85})
        EXPECT_EQ(csv::parse_double(csv::format_double(v), 0), v);
}

TEST(Csv, AtomicFileOnlyAppearsOnCommit) {
    const fs::path dir = fs::temp_directory_path() / "infodemic_atomic_test";
    fs::create_directories(dir);
    const fs::path p = dir / "out.csv";
    fs::remove(p);
    {
        csv::AtomicFile f(p);
        f.stream() << "partial";
        EXPECT_FALSE(fs::exists(p));
    }
    EXPECT_FALSE(fs::exists(p));
    EXPECT_FALSE(fs::exists(dir / "out.csv.tmp"));
    {
        csv::AtomicFile f(p);
        f.stream() << "done\n";
        f.commit();
    }
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    EXPECT_EQ(s, "done");
    fs::remove_all(dir);
}

TEST(Bitset, SetAlgebra) {
    UserBitset a(130), b(130);
    a.set(0);
    a.set(64);
    a.set(129);
    EXPECT_TRUE(b.insert(64));
    EXPECT_FALSE(b.insert(64));
    b.set(100);
    EXPECT_EQ(a.count(), 3u);
    a |= b;
    EXPECT_EQ(a.count(), 4u);
    std::vector<std::size_t> seen;
    a.for_each([&](std::size_t i) { seen.push_back(i); });
    EXPECT_EQ(seen, (std::vector<std::size_t>{0, 64, 100, 129}));
}

TEST(Rng, DeriveIsOrderSensitiveAndStable) {
    EXPECT_NE(rng::derive(1, {2, 3}), rng::derive(1, {3, 2}));
    EXPECT_EQ(rng::derive(1, {2, 3}), rng::derive(1, {2, 3}));
    rng::Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.bits(), b.bits());
}

TEST(Rng, UniformAndNormalMoments) {
    rng::Rng r(99);
    double s = 0, s2 = 0, n1 = 0, n2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
        const double z = r.normal();
        n1 += z;
        n2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.5, 0.005);
    EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12.0, 0.002);
    EXPECT_NEAR(n1 / n, 0.0, 0.01);
    EXPECT_NEAR(n2 / n, 1.0, 0.015);
}

TEST(Parallel, SameResultForAnyThreadCountAndRethrows) {
    std::vector<int> a(1000), b(1000);
    parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = static_cast<int>(i * i % 97); });
    parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = static_cast<int>(i * i % 97); });
    EXPECT_EQ(a, b);
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(RunConfig, ParsesKnownKeysAndDefaults) {
    std::istringstream in("# comment\nk = 3\nperiod=2020-02-21..2020-02-25\n\nretention = 1, 0.5\n");
    const auto c = RunConfig::parse(in);
    EXPECT_EQ(c.get_u64("k"), 3u);
    EXPECT_EQ(c.require("period"), "2020-02-21..2020-02-25");
    EXPECT_EQ(c.get_doubles("retention"), (std::vector<double>{1.0, 0.5}));
    EXPECT_EQ(c.get_u64("trials"), 10u);
    EXPECT_FALSE(c.get("graph"));
    EXPECT_THROW(c.require("graph"), ConfigError);
}

TEST(RunConfig, RejectsUnknownAndRepeatedKeys) {
    std::istringstream unknown("k = 3\nbogus = 1\n");
    try {
        RunConfig::parse(unknown);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
    std::istringstream twice("k = 3\nk = 4\n");
    EXPECT_THROW(RunConfig::parse(twice), ConfigError);
    std::istringstream noeq("k 3\n");
    EXPECT_THROW(RunConfig::parse(noeq), ConfigError);
    RunConfig c;
    EXPECT_THROW(c.set("nope", "1"), ConfigError);
}

TEST(RunConfig, TypedGettersValidate) {
    RunConfig c;
    c.set("k", "four");
    EXPECT_THROW(c.get_u64("k"), ConfigError);
    c.set("guideline", "maybe");
    EXPECT_THROW(c.get_bool("guideline"), ConfigError);
    c.set("guideline", "no");
    EXPECT_FALSE(c.get_bool("guideline"));
}

TEST(RunConfig, HeaderEchoesEntries) {
    RunConfig c;
    c.set("trials", "3");
    c.set("seed", "9");
    std::ostringstream out;
    c.write_header(out, "sweep");
    EXPECT_EQ(out.str(), "# command: sweep\n# seed = 9\n# trials = 3\n");
}

TEST(RunConfig, EveryKeyDocumented) {
    for (const auto& k : config_keys()) EXPECT_FALSE(k.help.empty()) << k.name;
}
