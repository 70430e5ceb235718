#include "citewin/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>

#include <CLI11.hpp>

#include "citewin/analysis.hpp"
#include "citewin/error.hpp"
#include "citewin/ingestion.hpp"
#include "citewin/npc.hpp"
#include "citewin/synth.hpp"

namespace citewin {

namespace {

namespace fs = std::filesystem;

YearRange parse_period(const std::string& text) {
    const auto dash = text.find('-');
    int first = 0, last = 0;
    auto parse = [](std::string_view s, int& v) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return !s.empty() && ec == std::errc() && p == s.data() + s.size();
    };
    const std::string_view view(text);
    if (dash == std::string::npos) {
        if (!parse(view, first)) throw ConfigError("invalid --period '" + text + "' (expected YYYY-YYYY)");
        return {first, first};
    }
    if (!parse(view.substr(0, dash), first) || !parse(view.substr(dash + 1), last) || last < first)
        throw ConfigError("invalid --period '" + text + "' (expected YYYY-YYYY)");
    return {first, last};
}

// Options shared by the analysis subcommands.
struct CommonArgs {
    std::string input;
    std::string period = "2001-2003";
    std::vector<int> years{2004, 2005, 2006, 2007, 2008};
    int obs_year = 2008;
    int benchmark = 2008;
    std::string level = "uda";
    double threshold = 0.5;
    std::string baseline = "aggregate";
    double top_percentile = 80.0;
    std::size_t permutations = 10000;
    std::uint64_t seed = 42;
    std::string out;
    unsigned threads = 0;
    std::string config;
    bool seed_given = false;
};

AnalysisOptions to_options(const CommonArgs& a) {
    AnalysisOptions o;
    o.period = parse_period(a.period);
    o.years = a.years;
    o.benchmark = a.benchmark;
    const auto level = parse_scope_level(a.level);
    if (!level) throw ConfigError("invalid --level '" + a.level + "' (expected uda or sds)");
    o.level = *level;
    if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) throw ConfigError("--threshold must lie in [0, 1]");
    o.threshold = a.threshold;
    const auto rule = parse_baseline_rule(a.baseline);
    if (!rule) throw ConfigError("invalid --baseline '" + a.baseline + "' (expected aggregate or mean)");
    o.baseline = *rule;
    o.threads = a.threads;
    return o;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void write_representativity(const RepresentativityReport& report, const fs::path& dir) {
    std::ofstream f(dir / "representativity.csv", std::ios::binary);
    write_representativity_csv(f, report);
}

int cmd_validate(const CommonArgs& a, std::ostream& out, std::ostream& err) {
    const auto corpus = load_corpus(a.input);
    std::vector<std::string> warnings;

    if (Corpus::rebuild_index(corpus.publications(), corpus.researchers(), corpus.authorships()) != corpus.index())
        throw IntegrityError("corpus indexes differ from a full rescan");

    std::set<std::string> staffed;
    for (const auto& r : corpus.researchers()) staffed.insert(r.sds);
    for (const auto& [sds, uda] : corpus.taxonomy())
        if (!staffed.contains(sds)) warnings.push_back("sds '" + sds + "' has no researchers");

    std::vector<bool> authored(corpus.publications().size(), false);
    for (const auto& list : corpus.index().pubs_by_researcher)
        for (std::size_t p : list) authored[p] = true;
    const auto years = corpus.observation_years();
    std::size_t unauthored = 0, partial = 0;
    for (std::size_t p = 0; p < authored.size(); ++p) {
        if (!authored[p]) ++unauthored;
        if (corpus.publications()[p].citations.size() != years.size()) ++partial;
    }
    if (unauthored) warnings.push_back(std::to_string(unauthored) + " publication(s) have no authors in the roster");
    if (partial)
        warnings.push_back(std::to_string(partial) +
                           " publication(s) lack citation counts for some observation years");
    print_warnings(err, warnings);

    std::string year_list;
    for (int y : years) year_list += (year_list.empty() ? "" : ",") + std::to_string(y);
    out << "ok: " << corpus.publications().size() << " publications, " << corpus.researchers().size()
        << " researchers, " << corpus.authorships().size() << " authorships, " << corpus.taxonomy().size()
        << " sds; observation years [" << year_list << "]\n";
    return kExitOk;
}

int cmd_rankings(const CommonArgs& a, std::ostream& out, std::ostream& err) {
    auto options = to_options(a);
    options.years = {a.obs_year};
    options.benchmark = a.obs_year;
    const auto corpus = load_corpus(a.input);
    const auto rankings = build_rankings(corpus, options);
    print_warnings(err, rankings.warnings);
    if (a.out.empty()) {
        write_rankings_csv(out, rankings);
        return kExitOk;
    }
    fs::create_directories(a.out);
    {
        std::ofstream f(fs::path(a.out) / "rankings.csv", std::ios::binary);
        write_rankings_csv(f, rankings);
    }
    write_representativity(rankings.representativity, a.out);
    write_manifest({"rankings", a.input, options, std::nullopt, std::nullopt, std::nullopt}, a.out);
    return kExitOk;
}

int cmd_sensitivity(const CommonArgs& a, std::ostream&, std::ostream& err) {
    const auto options = to_options(a);
    if (std::find(options.years.begin(), options.years.end(), options.benchmark) == options.years.end())
        throw ConfigError("benchmark year " + std::to_string(options.benchmark) + " is not among --years");
    const auto corpus = load_corpus(a.input);
    const auto rankings = build_rankings(corpus, options);
    const auto report = run_sensitivity(rankings, options.benchmark, options.threads);
    print_warnings(err, rankings.warnings);
    print_warnings(err, report.warnings);

    write_sensitivity_tables(report, a.out);
    {
        std::ofstream f(fs::path(a.out) / "rankings.csv", std::ios::binary);
        write_rankings_csv(f, rankings);
    }
    write_representativity(rankings.representativity, a.out);
    write_manifest({"sensitivity", a.input, options, std::nullopt, std::nullopt, std::nullopt}, a.out);
    return kExitOk;
}

int cmd_npc(const CommonArgs& a, std::ostream&, std::ostream& err) {
    const auto options = to_options(a);
    if (std::find(options.years.begin(), options.years.end(), options.benchmark) == options.years.end())
        throw ConfigError("benchmark year " + std::to_string(options.benchmark) + " is not among --years");
    if (!(a.top_percentile > 0.0 && a.top_percentile <= 100.0))
        throw ConfigError("--top-percentile must lie in (0, 100]");
    if (a.permutations == 0) throw ConfigError("--permutations must be positive");
    const auto corpus = load_corpus(a.input);
    const auto rankings = build_rankings(corpus, options);
    print_warnings(err, rankings.warnings);

    std::vector<std::string> warnings;
    const auto groups = max_shift_groups(rankings, options.benchmark, a.top_percentile, warnings);
    print_warnings(err, warnings);
    if (groups.size() < 2) {
        std::string reasons;
        for (const auto& w : warnings) reasons += "; " + w;
        throw AnalysisError("combined test needs at least two scopes with valid top/rest partitions, found " +
                            std::to_string(groups.size()) + reasons);
    }
    const auto result = npc_fisher_combine(groups, a.permutations, a.seed, options.threads);
    print_warnings(err, result.warnings);

    fs::create_directories(a.out);
    {
        std::ofstream f(fs::path(a.out) / "npc_results.csv", std::ios::binary);
        write_npc_csv(f, result);
    }
    write_manifest({"npc", a.input, options, a.top_percentile, a.permutations, a.seed}, a.out);
    return kExitOk;
}

int cmd_synth(const CommonArgs& a, std::ostream& out, std::ostream&) {
    auto config = load_synth_config(a.config);
    if (a.seed_given) config.seed = a.seed;
    generate(config, a.out);
    std::ofstream f(fs::path(a.out) / "synth_config.json", std::ios::binary);
    f << config.to_json().dump(2) << '\n';
    out << "wrote synthetic corpus to " << a.out << '\n';
    return kExitOk;
}

void add_analysis_options(CLI::App* cmd, CommonArgs& a, bool multi_year) {
    cmd->add_option("dir", a.input, "Corpus directory with the five CSV files")->required();
    cmd->add_option("--period", a.period, "Publication period YYYY-YYYY")->capture_default_str();
    if (multi_year) {
        cmd->add_option("--years", a.years, "Observation years, comma separated")->delimiter(',')->capture_default_str();
        cmd->add_option("--benchmark", a.benchmark, "Benchmark observation year")->capture_default_str();
    } else {
        cmd->add_option("--obs-year", a.obs_year, "Observation year for citation counts")->capture_default_str();
    }
    cmd->add_option("--level", a.level, "Ranking scope: uda or sds")->capture_default_str();
    cmd->add_option("--threshold", a.threshold, "Representativity threshold")->capture_default_str();
    cmd->add_option("--baseline", a.baseline, "National baseline: aggregate or mean")->capture_default_str();
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Citation-window sensitivity of field-normalized productivity rankings", "citewin"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    CommonArgs a;

    auto* validate = app.add_subcommand("validate", "Load a corpus directory and check every invariant");
    validate->add_option("dir", a.input, "Corpus directory")->required();

    auto* rankings = app.add_subcommand("rankings", "Productivity rankings for one observation year");
    add_analysis_options(rankings, a, false);
    rankings->add_option("--out", a.out, "Output directory (default: CSV on stdout)");

    auto* sensitivity = app.add_subcommand("sensitivity", "Rank-stability tables across observation years");
    add_analysis_options(sensitivity, a, true);
    sensitivity->add_option("--out", a.out, "Output directory")->required();

    auto* npc = app.add_subcommand("npc", "Top-vs-rest permutation tests on maximum rank shift, combined");
    add_analysis_options(npc, a, true);
    npc->add_option("--top-percentile", a.top_percentile, "Percentile defining top universities")
        ->capture_default_str();
    npc->add_option("--permutations", a.permutations, "Number of random relabelings")->capture_default_str();
    npc->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    npc->add_option("--out", a.out, "Output directory")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus directory");
    synth->add_option("--config", a.config, "Generator configuration (JSON)")->required();
    synth->add_option("--seed", a.seed, "Seed overriding the configuration");
    synth->add_option("--out", a.out, "Output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }
    a.seed_given = synth->count("--seed") > 0;

    try {
        if (*validate) return cmd_validate(a, out, err);
        if (*rankings) return cmd_rankings(a, out, err);
        if (*sensitivity) return cmd_sensitivity(a, out, err);
        if (*npc) return cmd_npc(a, out, err);
        if (*synth) return cmd_synth(a, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsageError;
    } catch (const MissingInputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsageError;
    }
    return kExitUsageError;
}

}  // namespace citewin
