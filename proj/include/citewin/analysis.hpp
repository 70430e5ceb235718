#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "citewin/corpus.hpp"
#include "citewin/ingestion.hpp"
#include "citewin/npc.hpp"
#include "citewin/productivity.hpp"
#include "citewin/sensitivity.hpp"

namespace citewin {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class ScopeLevel { Sds, Uda };

std::optional<ScopeLevel> parse_scope_level(std::string_view text);
std::string_view to_string(ScopeLevel level);

struct AnalysisOptions {
    YearRange period{2001, 2003};
    std::vector<int> years{2004, 2005, 2006, 2007, 2008};
    int benchmark = 2008;
    ScopeLevel level = ScopeLevel::Uda;
    double threshold = 0.5;
    BaselineRule baseline = BaselineRule::Aggregate;
    unsigned threads = 1;  // 0 = hardware concurrency; never changes results
};

// Rankings of every scope at every requested observation year.
struct YearlyRankings {
    ScopeLevel level = ScopeLevel::Uda;
    std::vector<int> years;  // ascending
    RepresentativityReport representativity;
    std::map<int, ProductivityRun> runs;
    std::map<std::string, std::vector<Ranking>> by_scope;  // rankings in year order
    std::vector<std::string> warnings;

    const Ranking& ranking(const std::string& scope, int year) const;
};

// Filter -> medians -> AII -> SS -> p -> P for each year. Throws
// MissingInputError listing the available years when one is absent.
YearlyRankings build_rankings(const Corpus& corpus, const AnalysisOptions& options);

void write_rankings_csv(std::ostream& out, const YearlyRankings& rankings);

struct ScopeSensitivity {
    std::string scope;
    std::vector<int> comparison_years;     // non-benchmark years, ascending
    std::vector<ShiftStats> descriptives;  // per comparison year
    std::vector<std::optional<double>> spearman;
    StabilitySummary summary;
    SmallShiftShares small_shifts;  // earliest year vs benchmark
    std::optional<std::vector<QuartileShiftStats>> quartiles;  // empty below four universities
    std::vector<RankRange> ranges;
};

struct SensitivityReport {
    ScopeLevel level = ScopeLevel::Uda;
    int benchmark = 0;
    std::vector<int> comparison_years;
    std::vector<ScopeSensitivity> scopes;  // scope id order
    std::vector<std::string> warnings;
};

SensitivityReport run_sensitivity(const YearlyRankings& rankings, int benchmark, unsigned threads = 1);

// Writes shift_descriptives.csv, stability_summary.csv, spearman.csv,
// small_shift_pcts.csv, quartile_stats.csv and rank_ranges.csv.
void write_sensitivity_tables(const SensitivityReport& report, const std::filesystem::path& directory);

// Per-scope groups for the top-vs-rest test: value = max rank shift against the
// benchmark, top = benchmark score above the percentile boundary. Scopes whose
// partition fails are reported in `warnings`.
std::vector<ScopeGroups> max_shift_groups(const YearlyRankings& rankings, int benchmark, double percentile,
                                          std::vector<std::string>& warnings);

void write_npc_csv(std::ostream& out, const NpcCombinedResult& result);

struct RunManifest {
    std::string command;
    std::string input_directory;
    AnalysisOptions options;
    std::optional<double> top_percentile;
    std::optional<std::size_t> permutations;
    std::optional<std::uint64_t> seed;

    nlohmann::json to_json() const;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& directory);

}  // namespace citewin
