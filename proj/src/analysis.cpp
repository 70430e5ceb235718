#include "citewin/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "citewin/csv.hpp"
#include "citewin/error.hpp"
#include "citewin/parallel.hpp"

namespace citewin {

namespace {

std::string comparison_label(int year, int benchmark) {
    return std::to_string(year) + "_vs_" + std::to_string(benchmark);
}

std::string or_na(const std::optional<double>& v, int decimals) { return v ? csv::fixed(*v, decimals) : "NA"; }

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw MissingInputError("cannot write " + path.string());
    return f;
}

std::map<std::string, double> scores_of(const Ranking& ranking) {
    std::map<std::string, double> out;
    for (const auto& e : ranking.entries) out[e.university] = e.score;
    return out;
}

}  // namespace

std::optional<ScopeLevel> parse_scope_level(std::string_view text) {
    if (text == "uda") return ScopeLevel::Uda;
    if (text == "sds") return ScopeLevel::Sds;
    return std::nullopt;
}

std::string_view to_string(ScopeLevel level) { return level == ScopeLevel::Uda ? "uda" : "sds"; }

const Ranking& YearlyRankings::ranking(const std::string& scope, int year) const {
    const auto& list = by_scope.at(scope);
    for (const auto& r : list)
        if (r.obs_year == year) return r;
    throw AnalysisError("no ranking for scope '" + scope + "' in " + std::to_string(year));
}

YearlyRankings build_rankings(const Corpus& corpus, const AnalysisOptions& options) {
    YearlyRankings out;
    out.level = options.level;
    out.years = options.years;
    std::sort(out.years.begin(), out.years.end());
    out.years.erase(std::unique(out.years.begin(), out.years.end()), out.years.end());
    if (out.years.empty()) throw ConfigError("no observation years requested");

    const auto available = corpus.observation_years();
    for (int year : out.years) {
        if (std::find(available.begin(), available.end(), year) == available.end()) {
            std::string list;
            for (int y : available) list += (list.empty() ? "" : ",") + std::to_string(y);
            throw MissingInputError("observation year " + std::to_string(year) +
                                    " is not in the citation data; available years: " + (list.empty() ? "none" : list));
        }
        corpus.require_observation_year(year);
    }

    out.representativity = representativity_filter(corpus, options.period, options.threshold);
    const auto retained = out.representativity.retained_sds();
    for (const auto& row : out.representativity.rows)
        if (row.empty) out.warnings.push_back("sds '" + row.sds + "' has no researchers; excluded");

    std::vector<ProductivityRun> runs(out.years.size());
    parallel_for(out.years.size(), options.threads, [&](std::size_t i) {
        runs[i] = compute_productivity(corpus, retained, options.period, out.years[i], options.baseline);
    });

    for (auto& run : runs) {
        for (const auto& w : run.warnings) out.warnings.push_back(std::to_string(run.obs_year) + ": " + w);
        const auto scores = options.level == ScopeLevel::Uda ? run.uda_scores() : run.sds_scores();
        for (const auto& [scope, by_university] : scores)
            out.by_scope[scope].push_back(rank_universities(by_university, scope, run.obs_year));
        out.runs.emplace(run.obs_year, std::move(run));
    }
    return out;
}

void write_rankings_csv(std::ostream& out, const YearlyRankings& rankings) {
    out << "scope_level,scope_id,obs_year,university_id,score,rank\n";
    for (const auto& [scope, list] : rankings.by_scope) {
        for (const auto& r : list) {
            for (const auto& e : r.entries)
                out << to_string(rankings.level) << ',' << scope << ',' << r.obs_year << ',' << e.university << ','
                    << csv::fixed(e.score, 6) << ',' << e.rank << '\n';
        }
    }
}

SensitivityReport run_sensitivity(const YearlyRankings& rankings, int benchmark, unsigned threads) {
    if (std::find(rankings.years.begin(), rankings.years.end(), benchmark) == rankings.years.end())
        throw ConfigError("benchmark year " + std::to_string(benchmark) + " is not among the observation years");
    if (rankings.years.size() < 2) throw ConfigError("sensitivity analysis needs at least two observation years");

    SensitivityReport report;
    report.level = rankings.level;
    report.benchmark = benchmark;
    for (int y : rankings.years)
        if (y != benchmark) report.comparison_years.push_back(y);

    std::vector<std::string> scopes;
    for (const auto& [scope, list] : rankings.by_scope) scopes.push_back(scope);
    report.scopes.resize(scopes.size());
    std::vector<std::vector<std::string>> scope_warnings(scopes.size());

    parallel_for(scopes.size(), threads, [&](std::size_t i) {
        const auto& list = rankings.by_scope.at(scopes[i]);
        const Ranking& bench = rankings.ranking(scopes[i], benchmark);
        auto& s = report.scopes[i];
        s.scope = scopes[i];
        s.comparison_years = report.comparison_years;
        for (int year : s.comparison_years) {
            const Ranking& r = rankings.ranking(scopes[i], year);
            std::vector<double> shifts;
            for (const auto& [u, shift] : rank_shifts(r, bench)) shifts.push_back(shift.absolute);
            s.descriptives.push_back(shift_descriptives(shifts));
            s.spearman.push_back(bench.entries.size() >= 2 ? spearman_rho(r, bench) : std::nullopt);
        }
        s.summary = stability_summary(list, benchmark);
        s.small_shifts = small_shift_shares(rankings.ranking(scopes[i], s.comparison_years.front()), bench);
        if (bench.entries.size() >= 4) {
            std::map<int, QuartileAssignment> classes;
            for (const auto& r : list) classes[r.obs_year] = quartile_classes(scores_of(r));
            s.quartiles = quartile_shift_stats(classes, benchmark);
        } else {
            scope_warnings[i].push_back("scope '" + scopes[i] + "' has fewer than four universities; quartiles skipped");
        }
        s.ranges = rank_ranges(list);
    });
    for (auto& w : scope_warnings) report.warnings.insert(report.warnings.end(), w.begin(), w.end());
    return report;
}

void write_sensitivity_tables(const SensitivityReport& report, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    const std::string level(to_string(report.level));
    std::vector<std::string> comparison_columns;
    for (int y : report.comparison_years) comparison_columns.push_back(comparison_label(y, report.benchmark));

    {
        auto f = open_output(directory / "shift_descriptives.csv");
        f << "scope_level,scope_id,statistic," << csv::join(comparison_columns) << '\n';
        using Getter = std::string (*)(const ShiftStats&);
        const std::pair<const char*, Getter> rows[] = {
            {"n", [](const ShiftStats& s) { return std::to_string(s.n); }},
            {"mean", [](const ShiftStats& s) { return csv::fixed(s.mean, 6); }},
            {"median", [](const ShiftStats& s) { return csv::fixed(s.median, 6); }},
            {"std_dev", [](const ShiftStats& s) { return csv::fixed(s.std_dev, 6); }},
            {"skewness", [](const ShiftStats& s) { return or_na(s.skewness, 6); }},
            {"kurtosis", [](const ShiftStats& s) { return or_na(s.kurtosis, 6); }},
        };
        for (const auto& s : report.scopes) {
            for (const auto& [name, get] : rows) {
                f << level << ',' << s.scope << ',' << name;
                for (const auto& d : s.descriptives) f << ',' << get(d);
                f << '\n';
            }
        }
    }
    {
        auto f = open_output(directory / "stability_summary.csv");
        f << "scope_level,scope_id,total_universities,pct_change,average,median,std_dev,max_ranking_variation\n";
        for (const auto& s : report.scopes) {
            const auto& m = s.summary;
            f << level << ',' << s.scope << ',' << m.universities << ',' << std::lround(m.share_changed * 100.0) << ','
              << csv::fixed(m.average, 6) << ',' << csv::fixed(m.median, 6) << ',' << csv::fixed(m.std_dev, 6) << ','
              << m.max_ranking_variation << '\n';
        }
    }
    {
        auto f = open_output(directory / "spearman.csv");
        f << "scope_level,scope_id";
        for (int y : report.comparison_years) f << ",rho_" << y;
        f << '\n';
        std::vector<double> sums(report.comparison_years.size(), 0.0);
        std::vector<std::size_t> counts(report.comparison_years.size(), 0);
        for (const auto& s : report.scopes) {
            f << level << ',' << s.scope;
            for (std::size_t i = 0; i < s.spearman.size(); ++i) {
                f << ',' << or_na(s.spearman[i], 6);
                if (s.spearman[i]) {
                    sums[i] += *s.spearman[i];
                    ++counts[i];
                }
            }
            f << '\n';
        }
        f << level << ",AVERAGE";
        for (std::size_t i = 0; i < sums.size(); ++i)
            f << ',' << (counts[i] ? csv::fixed(sums[i] / static_cast<double>(counts[i]), 6) : "NA");
        f << '\n';
    }
    {
        auto f = open_output(directory / "small_shift_pcts.csv");
        f << "scope_level,scope_id,universities,comparison,no_change_pct,leq3_pct\n";
        for (const auto& s : report.scopes) {
            f << level << ',' << s.scope << ',' << s.summary.universities << ','
              << comparison_label(s.comparison_years.front(), report.benchmark) << ',' << s.small_shifts.no_change_pct()
              << ',' << s.small_shifts.at_most_three_pct() << '\n';
        }
    }
    {
        auto f = open_output(directory / "quartile_stats.csv");
        f << "scope_level,scope_id,measure," << csv::join(comparison_columns) << '\n';
        for (const auto& s : report.scopes) {
            if (!s.quartiles) continue;
            f << level << ',' << s.scope << ",average_class_shift";
            for (const auto& q : *s.quartiles) f << ',' << csv::fixed(q.average_shift, 6);
            f << '\n' << level << ',' << s.scope << ",outliers_2_3";
            for (const auto& q : *s.quartiles) f << ',' << q.outliers;
            f << '\n';
        }
    }
    {
        auto f = open_output(directory / "rank_ranges.csv");
        std::vector<int> all_years = report.comparison_years;
        all_years.push_back(report.benchmark);
        std::sort(all_years.begin(), all_years.end());
        f << "scope_level,scope_id,university_id,min_rank,max_rank";
        for (int y : all_years) f << ",rank_" << y;
        f << '\n';
        for (const auto& s : report.scopes) {
            for (const auto& r : s.ranges) {
                f << level << ',' << s.scope << ',' << r.university << ',' << r.min_rank << ',' << r.max_rank;
                for (int y : all_years) f << ',' << r.ranks.at(y);
                f << '\n';
            }
        }
    }
}

std::vector<ScopeGroups> max_shift_groups(const YearlyRankings& rankings, int benchmark, double percentile,
                                          std::vector<std::string>& warnings) {
    if (std::find(rankings.years.begin(), rankings.years.end(), benchmark) == rankings.years.end())
        throw ConfigError("benchmark year " + std::to_string(benchmark) + " is not among the observation years");
    if (rankings.years.size() < 2) throw ConfigError("max rank shift needs at least two observation years");

    std::vector<ScopeGroups> out;
    for (const auto& [scope, list] : rankings.by_scope) {
        const Ranking& bench = rankings.ranking(scope, benchmark);
        Partition partition;
        try {
            partition = top_partition(scores_of(bench), percentile);
        } catch (const AnalysisError& e) {
            warnings.push_back("scope '" + scope + "' skipped: " + e.what());
            continue;
        }
        const std::set<std::string> top(partition.top.begin(), partition.top.end());
        ScopeGroups groups;
        groups.scope = scope;
        for (const auto& e : bench.entries) {
            std::map<int, int> ranks;
            for (const auto& r : list) ranks[r.obs_year] = r.find(e.university)->rank;
            groups.members.push_back(
                {e.university, static_cast<double>(max_rank_shift(ranks, benchmark)), top.contains(e.university)});
        }
        std::sort(groups.members.begin(), groups.members.end(),
                  [](const GroupMember& a, const GroupMember& b) { return a.university < b.university; });
        out.push_back(std::move(groups));
    }
    return out;
}

void write_npc_csv(std::ostream& out, const NpcCombinedResult& result) {
    out << "uda_id,observed_stat,p_value,direction,n_perm,seed\n";
    for (const auto& p : result.partials) {
        out << p.scope << ',' << csv::fixed(p.observed, 6) << ',' << csv::fixed(p.p_value, 3) << ','
            << symbol(p.direction) << ',' << p.permutations << ',' << p.seed << '\n';
    }
    out << "COMBINED," << csv::fixed(result.combined_statistic, 6) << ',' << csv::fixed(result.combined_p, 3) << ','
        << symbol(result.direction) << ',' << result.permutations << ',' << result.seed << '\n';
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j = {
        {"tool", "citewin"},
        {"version", kToolVersion},
        {"command", command},
        {"input_directory", input_directory},
        {"pub_period", {options.period.first, options.period.last}},
        {"observation_years", options.years},
        {"benchmark_year", options.benchmark},
        {"level", to_string(options.level)},
        {"threshold", options.threshold},
        {"baseline", to_string(options.baseline)},
    };
    if (top_percentile) j["top_percentile"] = *top_percentile;
    if (permutations) j["permutations"] = *permutations;
    if (seed) j["seed"] = *seed;
    return j;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    auto f = open_output(directory / "manifest.json");
    f << manifest.to_json().dump(2) << '\n';
}

}  // namespace citewin
