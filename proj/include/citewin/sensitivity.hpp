#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace citewin {

struct RankEntry {
    std::string university;
    double score = 0.0;
    int rank = 0;                // competition ("1224") rank, 1 = best
    double fractional_rank = 0;  // average rank over ties
};

// Ordered list of universities for one scope and observation year.
struct Ranking {
    std::string scope;
    int obs_year = 0;
    std::vector<RankEntry> entries;  // by rank, then university id

    const RankEntry* find(const std::string& university) const;
    std::set<std::string> universities() const;
};

// Descending by score. Throws AnalysisError on empty input or non-finite scores.
Ranking rank_universities(const std::map<std::string, double>& scores, std::string scope = {}, int obs_year = 0);

struct RankShift {
    int signed_shift = 0;  // rank in year - rank in benchmark; positive = worse in year
    int absolute = 0;
};

// Uses competition ranks. Throws AnalysisError listing universities present in
// only one of the rankings.
std::map<std::string, RankShift> rank_shifts(const Ranking& year, const Ranking& benchmark);

// Descriptives of absolute rank shifts; moments use divisor n, kurtosis is
// excess kurtosis. Skewness and kurtosis are empty when the variance is zero.
struct ShiftStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
};
ShiftStats shift_descriptives(std::span<const double> shifts);

// Pearson correlation of fractional ranks over the common university set.
// Empty when either ranking is entirely tied. Throws AnalysisError on
// mismatched university sets or fewer than two universities.
std::optional<double> spearman_rho(const Ranking& a, const Ranking& b);

struct StabilitySummary {
    std::string scope;
    std::size_t universities = 0;
    double share_changed = 0.0;  // fraction whose rank is not constant over all years
    // Descriptives across universities of each university's mean absolute
    // shift against the benchmark (population std dev).
    double average = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    int max_ranking_variation = 0;  // largest (max rank - min rank) over all years
};

// `rankings` holds one ranking per observation year and must include the
// benchmark year.
StabilitySummary stability_summary(std::span<const Ranking> rankings, int benchmark_year);

struct SmallShiftShares {
    double no_change = 0.0;  // fractions in [0, 1]
    double at_most_three = 0.0;

    int no_change_pct() const;
    int at_most_three_pct() const;
};
SmallShiftShares small_shift_shares(const Ranking& year, const Ranking& benchmark);

// university -> class 4 (top quartile) .. 1 (bottom quartile)
using QuartileAssignment = std::map<std::string, int>;

// Class boundaries are the linear-interpolation 25th/50th/75th percentiles;
// a score strictly above a boundary moves up a class. Throws AnalysisError for
// fewer than four universities.
QuartileAssignment quartile_classes(const std::map<std::string, double>& scores);

struct QuartileShiftStats {
    int year = 0;
    double average_shift = 0.0;
    std::size_t outliers = 0;                // shifts of two or three classes
    std::array<std::size_t, 4> histogram{};  // counts of shifts 0..3
};

// One entry per non-benchmark year, in year order.
std::vector<QuartileShiftStats> quartile_shift_stats(const std::map<int, QuartileAssignment>& by_year,
                                                     int benchmark_year);

struct RankRange {
    std::string university;
    int min_rank = 0;
    int max_rank = 0;
    std::map<int, int> ranks;  // obs_year -> rank
};
std::vector<RankRange> rank_ranges(std::span<const Ranking> rankings);

}  // namespace citewin
