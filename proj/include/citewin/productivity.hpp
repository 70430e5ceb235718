#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citewin/corpus.hpp"
#include "citewin/impact.hpp"

namespace citewin {

// How the national reference productivity of an SDS is formed.
enum class BaselineRule {
    Aggregate,       // sum of SS over sum of RS
    UnweightedMean,  // plain mean of university productivities
};

std::optional<BaselineRule> parse_baseline_rule(std::string_view text);
std::string_view to_string(BaselineRule rule);

struct ProductivityCell {
    std::string university;
    std::string sds;
    int obs_year = 0;
    double strength = 0.0;    // SS
    std::size_t staff = 0;    // RS
    double productivity = 0;  // p = SS / RS
};

struct NationalBaseline {
    std::string sds;
    int obs_year = 0;
    double value = 0.0;  // p-bar
    std::size_t active_universities = 0;
};

struct SdsContribution {
    std::string sds;
    double productivity = 0.0;
    double baseline = 0.0;
    std::size_t staff = 0;
    double value = 0.0;      // (p / p-bar) * (RS_w / RS)
    bool undefined = false;  // p-bar == 0, contributes 0
};

struct UdaProductivity {
    std::string university;
    std::string uda;
    int obs_year = 0;
    double score = 0.0;  // P
    std::size_t staff = 0;
    std::vector<SdsContribution> contributions;
};

// Scientific strength of a university x SDS cell: AII summed over the distinct
// publications of the cell dated inside `period`. Co-authored publications
// count in full in every cell they belong to.
double scientific_strength(const Corpus& corpus, const CellKey& cell, YearRange period, int obs_year,
                           const MedianTable& medians);

// Same, from precomputed AII values indexed like corpus.publications().
double scientific_strength(const Corpus& corpus, const CellKey& cell, YearRange period,
                           std::span<const double> impact);

// nullopt when staff == 0: the university is not active in the SDS.
std::optional<ProductivityCell> sds_productivity(const CellKey& cell, int obs_year, double strength,
                                                 std::size_t staff);

// nullopt when no university is active in the SDS.
std::optional<NationalBaseline> national_baseline(const std::string& sds, int obs_year,
                                                  std::span<const ProductivityCell> cells,
                                                  BaselineRule rule = BaselineRule::Aggregate);

// P = sum over the university's SDSs of (p / p-bar) * (RS_w / RS). `cells` are
// the university's cells in SDSs of the UDA. Throws AnalysisError when total
// staff is zero, a baseline is missing, or p > 0 meets p-bar == 0.
UdaProductivity uda_productivity(const std::string& university, const std::string& uda,
                                 std::span<const ProductivityCell> cells,
                                 const std::map<std::string, NationalBaseline>& baselines);

// Scores keyed by scope id, then university id.
using ScopeScores = std::map<std::string, std::map<std::string, double>>;

// Full evaluation for one observation year over the retained SDSs.
struct ProductivityRun {
    int obs_year = 0;
    YearRange period;
    BaselineRule rule = BaselineRule::Aggregate;
    std::vector<ProductivityCell> cells;  // ordered by (sds, university)
    std::map<std::string, NationalBaseline> baselines;
    std::vector<UdaProductivity> uda;  // ordered by (uda, university)
    std::vector<std::string> warnings;

    ScopeScores sds_scores() const;
    ScopeScores uda_scores() const;
};

ProductivityRun compute_productivity(const Corpus& corpus, const std::set<std::string>& retained_sds,
                                     YearRange period, int obs_year, BaselineRule rule = BaselineRule::Aggregate);

}  // namespace citewin
