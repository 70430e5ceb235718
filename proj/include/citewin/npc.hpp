#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citewin {

enum class Direction { Less, Greater, Equal };

// "<", ">" or "=".
std::string_view symbol(Direction d);

// Largest |rank_y - rank_benchmark| over the non-benchmark years. Throws
// AnalysisError when the benchmark is missing or there is no other year.
int max_rank_shift(const std::map<int, int>& ranks_by_year, int benchmark_year);

struct Partition {
    std::vector<std::string> top;   // benchmark score strictly above the boundary
    std::vector<std::string> rest;
    double boundary = 0.0;          // linear-interpolation percentile of the scores
};

// Splits universities at the given percentile (0, 100] of their benchmark
// scores. Throws AnalysisError when either side would be empty.
Partition top_partition(const std::map<std::string, double>& scores, double percentile);

struct PermTestResult {
    std::string scope;
    double observed = 0.0;  // mean(top) - mean(rest)
    double p_value = 1.0;   // two-sided
    Direction direction = Direction::Equal;
    std::size_t permutations = 0;  // relabelings evaluated (all of them when exhaustive)
    std::uint64_t seed = 0;
    bool exhaustive = false;
    bool degenerate = false;  // every value identical
};

enum class PermMode {
    Auto,        // enumerate when the relabelings fit in n_perm, else sample
    MonteCarlo,  // always sample n_perm relabelings
};

// Two-sample permutation test on the difference of group means. Enumerates
// every relabeling when their number is at most n_perm (p = hits / total,
// observed labeling included); otherwise draws n_perm random relabelings and
// reports (hits + 1) / (n_perm + 1). Iteration b uses its own random stream
// derived from (seed, b), so the result is independent of `threads`.
PermTestResult two_sample_perm_test(std::span<const double> top, std::span<const double> rest, std::size_t n_perm,
                                    std::uint64_t seed, unsigned threads = 1, PermMode mode = PermMode::Auto);

struct GroupMember {
    std::string university;
    double value = 0.0;
    bool top = false;
};

struct ScopeGroups {
    std::string scope;
    std::vector<GroupMember> members;
};

struct NpcCombinedResult {
    std::vector<PermTestResult> partials;  // usable scopes, input order
    double combined_statistic = 0.0;       // Fisher: -2 * sum log(partial p)
    double combined_p = 1.0;
    Direction direction = Direction::Equal;  // majority of partial directions
    std::size_t permutations = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    std::vector<std::string> warnings;
};

// Nonparametric combination of the per-scope tests with Fisher's function.
// All scopes are relabeled from one shared stream per iteration: every
// university draws a single random key and, within each scope, the members with
// the smallest keys form the top group, so universities appearing in several
// scopes are relabeled consistently. When the joint number of relabelings is at
// most n_perm they are enumerated instead (scopes independently). Scopes with an
// empty group are skipped with a warning; fewer than two usable scopes throw
// AnalysisError.
NpcCombinedResult npc_fisher_combine(std::span<const ScopeGroups> scopes, std::size_t n_perm, std::uint64_t seed,
                                     unsigned threads = 1);

}  // namespace citewin
