// Command-line front end: ingestion, simulation, fitting and the counterfactual
// experiments, all reading and writing plain CSV (and a JSON model file).

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "infodemic/cascade.hpp"
#include "infodemic/counterfactual.hpp"
#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"
#include "infodemic/exposure.hpp"
#include "infodemic/graph.hpp"
#include "infodemic/replica.hpp"
#include "infodemic/rng.hpp"
#include "infodemic/run_config.hpp"
#include "infodemic/salesmodel.hpp"

namespace fs = std::filesystem;
using namespace infodemic;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// -- Inputs ---------------------------------------------------------------------------------

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file " + path);
    return in;
}

/// Runs a reader, prefixing parse errors with the file name.
template <class F>
auto read_file(const std::string& path, F&& reader) {
    std::ifstream in = open_input(path);
    try {
        return reader(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

SocialGraph load_graph(const RunConfig& cfg) {
    const std::string path = cfg.require("graph");
    auto r = read_file(path, [](std::istream& in) { return load_edges(in); });
    spdlog::info("{}: {} users, {} edges", path, r.graph.n_users(), r.graph.n_edges());
    return std::move(r.graph);
}

std::vector<Cascade> load_cascades(const RunConfig& cfg, const SocialGraph& g) {
    const std::string tp = cfg.require("tweets");
    const std::string rp = cfg.require("retweets");
    std::ifstream tweets = open_input(tp);
    std::ifstream retweets = open_input(rp);
    try {
        return read_cascades(tweets, retweets, g);
    } catch (const ParseError& e) {
        throw ParseError(tp + " / " + rp + ": " + e.what());
    }
}

FittedSalesModel load_model(const RunConfig& cfg) {
    const std::string path = cfg.require("model");
    return read_file(path, [](std::istream& in) {
        std::stringstream ss;
        ss << in.rdbuf();
        return deserialize_model(ss.str());
    });
}

DateRange period_of(const RunConfig& cfg) {
    try {
        return DateRange::parse(cfg.require("period"));
    } catch (const ParseError& e) {
        throw ConfigError(std::string("period: ") + e.what());
    }
}

ExposureOptions exposure_options(const RunConfig& cfg) {
    ExposureOptions o;
    o.cumulative = cfg.get_bool("cumulative_exposure");
    o.include_authors = cfg.get_bool("include_authors");
    o.threads = static_cast<unsigned>(cfg.get_u64("threads"));
    return o;
}

ScenarioOptions scenario_of(const RunConfig& cfg) {
    ScenarioOptions s;
    s.period = period_of(cfg);
    s.exposure = exposure_options(cfg);
    s.horizon_days = static_cast<int>(cfg.get_u64("horizon_days"));
    return s;
}

/// The exposure matrix from --exposure when given, else computed from the cascades.
ExposureMatrix exposure_input(const RunConfig& cfg) {
    if (auto path = cfg.get("exposure"))
        return read_file(*path, [](std::istream& in) { return read_exposure_csv(in); });
    const SocialGraph g = load_graph(cfg);
    const auto cascades = load_cascades(cfg, g);
    return exposure_matrix(g, cascades, period_of(cfg), exposure_options(cfg));
}

// -- Outputs --------------------------------------------------------------------------------

class Outputs {
public:
    Outputs(const RunConfig& cfg, std::string command)
        : cfg_(cfg), command_(std::move(command)), dir_(cfg.require("out")) {
        fs::create_directories(dir_);
    }

    /// Writes one CSV atomically, preceded by the run-config comment header.
    void csv(const std::string& name, const std::function<void(std::ostream&)>& body) const {
        csv::AtomicFile f(dir_ / name);
        cfg_.write_header(f.stream(), command_);
        body(f.stream());
        f.commit();
        spdlog::info("wrote {}", (dir_ / name).string());
    }

    void text(const std::string& name, const std::string& content) const {
        csv::AtomicFile f(dir_ / name);
        f.stream() << content;
        f.commit();
        spdlog::info("wrote {}", (dir_ / name).string());
    }

    const RunConfig& config() const { return cfg_; }

private:
    const RunConfig& cfg_;
    std::string command_;
    fs::path dir_;
};

void write_pca_csv(std::ostream& out, const FittedSalesModel& m) {
    out << "component,eigenvalue,contribution,x1,x2,x3,x4,x5,x6,x7\n";
    for (std::size_t i = 0; i < m.pca.eigenvalues.size(); ++i) {
        out << "pc" << i + 1 << ',' << csv::format_double(m.pca.eigenvalues[i]) << ','
            << csv::format_double(m.pca.contribution[i]);
        for (std::size_t j = 0; j < kExposureClasses; ++j)
            out << ',' << csv::format_double(m.pca.eigenvectors(i, j));
        out << '\n';
    }
}

void write_impacts_csv(std::ostream& out, const FittedSalesModel& m, const ExposureCounts& totals) {
    const ImpactVector per = per_viewer_impacts(m);
    const ImpactVector group = group_impacts(per, totals);
    out << "class,per_viewer_impact,total_viewers,group_impact\n";
    for (std::size_t j = 0; j < kExposureClasses; ++j)
        out << 'x' << j + 1 << ',' << csv::format_double(per[j]) << ',' << totals[j] << ','
            << csv::format_double(group[j]) << '\n';
}

void write_fitted_csv(std::ostream& out, const SalesSeries& actual, const SalesSeries& fitted) {
    out << "date,sales_index,predicted\n";
    for (std::size_t i = 0; i < actual.size(); ++i)
        out << actual.points[i].date.iso() << ',' << csv::format_double(actual.points[i].index)
            << ',' << csv::format_double(fitted.points[i].index) << '\n';
}

// -- Commands -------------------------------------------------------------------------------

void cmd_gen_graph(const RunConfig& cfg) {
    GraphGenConfig gc;
    gc.n_users = cfg.get_u64("n_users");
    gc.seed = cfg.get_u64("seed");
    if (cfg.get("fixed_degree"))
        gc.degree_model = FixedDegree{static_cast<std::uint32_t>(cfg.get_u64("fixed_degree"))};
    else
        gc.degree_model = PowerLawDegree{cfg.get_double("exponent"),
                                         static_cast<std::uint32_t>(cfg.get_u64("min_degree")),
                                         static_cast<std::uint32_t>(cfg.get_u64("max_degree"))};
    validate(gc);
    const SocialGraph g = generate_graph(gc);
    Outputs(cfg, "gen-graph").csv("graph.csv", [&](std::ostream& o) { write_edges(o, g); });
}

void cmd_simulate(const RunConfig& cfg) {
    const SocialGraph g = load_graph(cfg);
    if (g.n_users() == 0) throw ConfigError("graph has no users");
    std::vector<Cascade> existing;
    if (cfg.get("tweets") && cfg.get("retweets")) existing = load_cascades(cfg, g);

    const auto category = parse_category(cfg.require("category"));
    if (!category) throw ConfigError("unknown category '" + cfg.require("category") + "'");
    const DateRange period = period_of(cfg);
    const std::uint64_t seed = cfg.get_u64("seed");
    const double rate = cfg.get_double("rt_rate");

    TweetId next_id = 1;
    for (const auto& c : existing) next_id = std::max(next_id, c.seed.id + 1);
    rng::Rng r(rng::derive(seed, {0x5eed}));
    JointSimulationSpec spec;
    spec.horizon_days = static_cast<int>(cfg.get_u64("horizon_days"));
    spec.rng_seed = rng::derive(seed, {0x51a});
    const std::size_t n = cfg.get_u64("seed_tweets");
    for (std::size_t i = 0; i < n; ++i) {
        const auto author = static_cast<UserId>(r.below(g.n_users()));
        const Date day = period.at(static_cast<std::size_t>(r.below(period.size())));
        spec.seeds.push_back({next_id++, author, *category, day, encode_seq(day, r.bits())});
        spec.rt_rates.push_back(rate);
    }
    std::vector<Cascade> all = std::move(existing);
    for (auto& c : simulate_joint(g, spec)) all.push_back(std::move(c));
    make_unique_seqs(all);

    const Outputs out(cfg, "simulate");
    out.csv("tweets.csv", [&](std::ostream& o) { write_tweets(o, all, g); });
    out.csv("retweets.csv", [&](std::ostream& o) { write_retweets(o, all, g); });
}

void cmd_exposure(const RunConfig& cfg) {
    const SocialGraph g = load_graph(cfg);
    const auto cascades = load_cascades(cfg, g);
    const ExposureMatrix m = exposure_matrix(g, cascades, period_of(cfg), exposure_options(cfg));
    Outputs(cfg, "exposure").csv("exposure.csv", [&](std::ostream& o) { write_exposure_csv(o, m); });
}

void cmd_fit(const RunConfig& cfg) {
    const ExposureMatrix m = exposure_input(cfg);
    const SalesSeries sales =
        read_file(cfg.require("sales"), [](std::istream& in) { return read_sales_csv(in); });
    FitOptions fo;
    fo.k = cfg.get_u64("k");
    fo.drop_nonsignificant = cfg.get_bool("drop_nonsignificant");
    fo.alpha = cfg.get_double("alpha");
    const FittedSalesModel model = fit(m, sales, fo);
    spdlog::info("fit: R^2 = {:.4f}, F = {:.3f}", model.diagnostics.r_squared, model.diagnostics.f_value);

    const Outputs out(cfg, "fit");
    out.text("model.json", serialize_model(model, cfg.entries()));
    out.csv("diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(o, model); });
    out.csv("pca.csv", [&](std::ostream& o) { write_pca_csv(o, model); });
    out.csv("fitted.csv", [&](std::ostream& o) { write_fitted_csv(o, sales, predict(model, m)); });
    out.csv("impacts.csv", [&](std::ostream& o) { write_impacts_csv(o, model, total_exposures(m)); });
}

void cmd_impacts(const RunConfig& cfg) {
    const FittedSalesModel model = load_model(cfg);
    const ExposureMatrix m = exposure_input(cfg);
    Outputs(cfg, "impacts").csv("impacts.csv", [&](std::ostream& o) {
        write_impacts_csv(o, model, total_exposures(m));
    });
}

void cmd_whatif(const RunConfig& cfg) {
    const SocialGraph g = load_graph(cfg);
    const auto cascades = load_cascades(cfg, g);
    const FittedSalesModel model = load_model(cfg);
    WhatIfConfig wc;
    wc.scenario = scenario_of(cfg);
    const std::string misinfo = cfg.get("misinfo_rate").value_or("0.00186");
    if (misinfo != "replay") {
        try {
            wc.scenario.misinfo_rt_rate = csv::parse_double(misinfo, 0);
        } catch (const ParseError&) {
            throw ConfigError("whatif: misinfo_rate must be one number or 'replay'");
        }
        if (!(*wc.scenario.misinfo_rt_rate >= 0.0 && *wc.scenario.misinfo_rt_rate <= 1.0))
            throw ConfigError("misinfo_rate must be in [0, 1]");
    }
    wc.retentions = cfg.get_doubles("retention");
    wc.guideline = cfg.get_bool("guideline");
    wc.trials = cfg.get_u64("trials");
    wc.base_seed = cfg.get_u64("seed");
    wc.threads = static_cast<unsigned>(cfg.get_u64("threads"));
    const WhatIfTable t = whatif_table(g, cascades, model, wc);

    const Outputs out(cfg, "whatif");
    out.csv("whatif_trials.csv", [&](std::ostream& o) { write_whatif_trials_csv(o, t); });
    out.csv("whatif_summary.csv", [&](std::ostream& o) { write_whatif_summary_csv(o, t); });
}

void cmd_sweep(const RunConfig& cfg) {
    const SocialGraph g = load_graph(cfg);
    const auto cascades = load_cascades(cfg, g);
    const FittedSalesModel model = load_model(cfg);
    SweepConfig sc;
    sc.scenario = scenario_of(cfg);
    if (cfg.get("misinfo_rate")) sc.misinfo_rates = cfg.get_doubles("misinfo_rate");
    sc.corrective_rates = cfg.get_doubles("corrective_rate");
    sc.trials = cfg.get_u64("trials");
    sc.base_seed = cfg.get_u64("seed");
    sc.replay_corrective = cfg.get_bool("replay_corrective");
    sc.reference_corrective_rate = cfg.get_double("reference_corrective_rate");
    sc.threads = static_cast<unsigned>(cfg.get_u64("threads"));
    const SweepGrid grid = sweep(g, cascades, model, sc);

    const Outputs out(cfg, "sweep");
    out.csv("sweep_trials.csv", [&](std::ostream& o) { write_sweep_trials_csv(o, grid); });
    out.csv("sweep_summary.csv", [&](std::ostream& o) { write_sweep_summary_csv(o, grid); });
    out.csv("sweep_exposure.csv", [&](std::ostream& o) { write_sweep_exposure_csv(o, grid); });
}

void cmd_replica(const RunConfig& cfg) {
    ReplicaConfig rc;
    rc.n_users = cfg.get_u64("n_users");
    rc.seed = cfg.get_u64("seed");
    rc.period = period_of(cfg);
    rc.horizon_days = static_cast<int>(cfg.get_u64("horizon_days"));
    rc.degree = {cfg.get_double("exponent"), static_cast<std::uint32_t>(cfg.get_u64("min_degree")),
                 static_cast<std::uint32_t>(cfg.get_u64("max_degree"))};
    rc.corrective_pool = std::min<std::size_t>(rc.corrective_pool, rc.n_users);
    rc.soldout_pool = std::min<std::size_t>(rc.soldout_pool, rc.n_users);
    const Replica rep = make_replica(rc);

    const Outputs out(cfg, "replica (synthetic data)");
    out.csv("graph.csv", [&](std::ostream& o) { write_edges(o, rep.graph); });
    out.csv("tweets.csv", [&](std::ostream& o) { write_tweets(o, rep.cascades, rep.graph); });
    out.csv("retweets.csv", [&](std::ostream& o) { write_retweets(o, rep.cascades, rep.graph); });
    out.csv("sales.csv", [&](std::ostream& o) { write_sales_csv(o, rep.sales); });
    out.csv("exposure.csv", [&](std::ostream& o) { write_exposure_csv(o, rep.baseline); });
    out.text("reference_model.json", serialize_model(rep.reference, cfg.entries()));
    out.csv("replica_summary.csv", [&](std::ostream& o) {
        const ExposureCounts t = total_exposures(rep.baseline);
        std::array<std::size_t, 3> tweets{}, retweets{};
        for (const auto& c : rep.cascades) {
            ++tweets[static_cast<std::size_t>(c.seed.category)];
            retweets[static_cast<std::size_t>(c.seed.category)] += c.events.size();
        }
        o << "metric,value\n";
        for (TweetCategory c : kCategories) {
            o << to_string(c) << "_tweets," << tweets[static_cast<std::size_t>(c)] << '\n';
            o << to_string(c) << "_retweets," << retweets[static_cast<std::size_t>(c)] << '\n';
        }
        for (std::size_t j = 0; j < kExposureClasses; ++j) o << "total_x" << j + 1 << ',' << t[j] << '\n';
        o << "x1_over_x2," << csv::format_double(rep.x1_x2_ratio) << '\n';
        o << "population_scale," << csv::format_double(rep.population_scale) << '\n';
        o << "baseline_sum_index," << csv::format_double(sum_index(predict(rep.reference, rep.baseline)))
          << '\n';
    });
}

void configure_logging() {
    spdlog::set_default_logger(spdlog::stderr_color_st("infodemic"));
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("INFODEMIC_LOG")) {
        const auto level = spdlog::level::from_str(env);
        if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Misinformation / correction diffusion and sales-impact toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    struct Flag {
        std::string name;
        std::string key;
        std::string help;
    };
    const std::vector<Flag> flags = {
        {"--graph", "graph", "follower edge CSV"},
        {"--tweets", "tweets", "seed tweet CSV"},
        {"--retweets", "retweets", "retweet event CSV"},
        {"--sales", "sales", "sales CSV (date,sales_index or date,sales,sales_prev_year)"},
        {"--model", "model", "fitted model JSON"},
        {"--exposure", "exposure", "exposure matrix CSV"},
        {"--period", "period", "analysis window FROM..TO"},
        {"--k", "k", "retained principal components"},
        {"--retention", "retention", "comma-separated corrective retention levels"},
        {"--misinfo-rate", "misinfo_rate", "misinformation retweet rate(s)"},
        {"--corrective-rate", "corrective_rate", "corrective retweet rate(s)"},
        {"--trials", "trials", "trials per condition"},
        {"--seed", "seed", "base random seed"},
        {"--threads", "threads", "worker threads (0 = all cores)"},
        {"--out", "out", "output directory"},
        {"--n-users", "n_users", "number of users"},
        {"--category", "category", "category of simulated seed tweets"},
        {"--rt-rate", "rt_rate", "retweet probability for simulate"},
    };

    struct Command {
        std::string name;
        std::string help;
        std::vector<std::string> flags;
        void (*run)(const RunConfig&);
    };
    const std::vector<Command> commands = {
        {"gen-graph", "Generate a synthetic follower graph", {"--n-users", "--seed", "--out"}, cmd_gen_graph},
        {"simulate", "Simulate retweet cascades for new seed tweets",
         {"--graph", "--tweets", "--retweets", "--period", "--category", "--rt-rate", "--seed", "--out"},
         cmd_simulate},
        {"exposure", "Count daily possible viewers per exposure class",
         {"--graph", "--tweets", "--retweets", "--period", "--threads", "--out"}, cmd_exposure},
        {"fit", "Fit the PCA + regression sales model",
         {"--graph", "--tweets", "--retweets", "--exposure", "--sales", "--period", "--k", "--threads",
          "--out"},
         cmd_fit},
        {"impacts", "Per-viewer and per-class impacts of a fitted model",
         {"--model", "--graph", "--tweets", "--retweets", "--exposure", "--period", "--threads", "--out"},
         cmd_impacts},
        {"whatif", "Corrective-reduction and guideline experiments",
         {"--graph", "--tweets", "--retweets", "--model", "--period", "--retention", "--misinfo-rate",
          "--trials", "--seed", "--threads", "--out"},
         cmd_whatif},
        {"sweep", "Misinformation x corrective retweet-rate grid",
         {"--graph", "--tweets", "--retweets", "--model", "--period", "--misinfo-rate",
          "--corrective-rate", "--trials", "--seed", "--threads", "--out"},
         cmd_sweep},
        {"replica", "Write the calibrated synthetic replica dataset",
         {"--n-users", "--seed", "--period", "--out"}, cmd_replica},
    };

    std::map<std::string, std::string> values;  // flag name -> given value
    std::map<std::string, std::string> config_paths;
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_paths[cmd.name], "key = value configuration file");
        for (const auto& fname : cmd.flags) {
            const auto it = std::find_if(flags.begin(), flags.end(),
                                         [&](const Flag& f) { return f.name == fname; });
            sub->add_option(it->name, values[cmd.name + it->name], it->help);
        }
        subs.emplace_back(sub, &cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed()) continue;
        try {
            RunConfig cfg;
            if (const auto& p = config_paths[cmd->name]; !p.empty()) cfg = RunConfig::load(p);
            for (const auto& fname : cmd->flags) {
                if (sub->get_option(fname)->count() == 0) continue;
                const auto it = std::find_if(flags.begin(), flags.end(),
                                             [&](const Flag& f) { return f.name == fname; });
                cfg.set(it->key, values[cmd->name + fname]);
            }
            cmd->run(cfg);
            return 0;
        } catch (const ConfigError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitValidation;
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitValidation;
        } catch (const DomainError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitValidation;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
    }
    return kExitValidation;
}
