#include "citewin/npc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>

#include "citewin/error.hpp"
#include "citewin/parallel.hpp"
#include "citewin/random.hpp"
#include "citewin/stats.hpp"

namespace citewin {

namespace {

// |T_perm| counts as reaching |T_obs| up to rounding in the group sums.
bool reaches(double candidate, double reference) {
    return candidate >= reference - 1e-10 * std::max(1.0, std::abs(reference));
}

// C(n, k), saturating at cap + 1.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
    k = std::min(k, n - k);
    long double value = 1.0L;
    for (std::size_t i = 1; i <= k; ++i) {
        value = value * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (value > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::size_t>(std::llround(value));
}

template <class F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        f(std::as_const(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Difference of group means as a function of the top-group sum.
struct MeanDifference {
    double total = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;

    double operator()(double top_sum) const {
        return top_sum / static_cast<double>(k) - (total - top_sum) / static_cast<double>(n - k);
    }
};

Direction direction_of(double observed) {
    if (observed < 0.0) return Direction::Less;
    if (observed > 0.0) return Direction::Greater;
    return Direction::Equal;
}

bool all_equal(std::span<const double> values) {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

}  // namespace

std::string_view symbol(Direction d) {
    switch (d) {
        case Direction::Less:
            return "<";
        case Direction::Greater:
            return ">";
        case Direction::Equal:
            break;
    }
    return "=";
}

int max_rank_shift(const std::map<int, int>& ranks_by_year, int benchmark_year) {
    auto bench = ranks_by_year.find(benchmark_year);
    if (bench == ranks_by_year.end())
        throw AnalysisError("no rank for benchmark year " + std::to_string(benchmark_year));
    if (ranks_by_year.size() < 2) throw AnalysisError("max rank shift needs at least one non-benchmark year");
    int out = 0;
    for (const auto& [year, rank] : ranks_by_year) out = std::max(out, std::abs(rank - bench->second));
    return out;
}

Partition top_partition(const std::map<std::string, double>& scores, double percentile) {
    if (!(percentile > 0.0 && percentile <= 100.0)) throw AnalysisError("top percentile must lie in (0, 100]");
    if (scores.size() < 2) throw AnalysisError("top partition needs at least two universities");
    std::vector<double> values;
    for (const auto& [u, s] : scores) values.push_back(s);
    Partition out;
    out.boundary = stats::quantile_linear(values, percentile / 100.0);
    for (const auto& [u, s] : scores) (s > out.boundary ? out.top : out.rest).push_back(u);
    if (out.top.empty())
        throw AnalysisError("empty top group: no university scores above the " + std::to_string(percentile) +
                            "th percentile");
    if (out.rest.empty()) throw AnalysisError("empty comparison group below the top percentile");
    return out;
}

PermTestResult two_sample_perm_test(std::span<const double> top, std::span<const double> rest, std::size_t n_perm,
                                    std::uint64_t seed, unsigned threads, PermMode mode) {
    if (top.empty() || rest.empty()) throw AnalysisError("permutation test needs two nonempty groups");
    if (n_perm == 0) throw AnalysisError("permutation count must be positive");

    std::vector<double> pooled(top.begin(), top.end());
    pooled.insert(pooled.end(), rest.begin(), rest.end());
    const MeanDifference stat{std::accumulate(pooled.begin(), pooled.end(), 0.0), pooled.size(), top.size()};

    PermTestResult out;
    out.seed = seed;
    out.observed = stat(std::accumulate(top.begin(), top.end(), 0.0));
    out.direction = direction_of(out.observed);
    const double observed_abs = std::abs(out.observed);

    if (all_equal(pooled)) {
        out.observed = 0.0;
        out.direction = Direction::Equal;
        out.degenerate = true;
        out.p_value = 1.0;
        out.permutations = 0;
        return out;
    }

    const std::size_t assignments = binomial_capped(stat.n, stat.k, n_perm);
    if (mode == PermMode::Auto && assignments <= n_perm) {
        std::size_t hits = 0;
        for_each_combination(stat.n, stat.k, [&](const std::vector<std::size_t>& idx) {
            double sum = 0.0;
            for (std::size_t i : idx) sum += pooled[i];
            if (reaches(std::abs(stat(sum)), observed_abs)) ++hits;
        });
        out.exhaustive = true;
        out.permutations = assignments;
        out.p_value = static_cast<double>(hits) / static_cast<double>(assignments);
        return out;
    }

    const std::size_t chunks = std::min<std::size_t>(n_perm, 64);
    std::vector<std::size_t> hits(chunks, 0);
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::vector<double> work(pooled.size());
        for (std::size_t b = 1 + c; b <= n_perm; b += chunks) {
            auto rng = SplitMix64::stream(seed, b);
            work = pooled;
            double sum = 0.0;
            for (std::size_t i = 0; i < stat.k; ++i) {
                const std::size_t j = i + rng.below(work.size() - i);
                std::swap(work[i], work[j]);
                sum += work[i];
            }
            if (reaches(std::abs(stat(sum)), observed_abs)) ++hits[c];
        }
    });
    const std::size_t total_hits = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    out.permutations = n_perm;
    out.p_value = static_cast<double>(total_hits + 1) / static_cast<double>(n_perm + 1);
    return out;
}

namespace {

struct PreparedScope {
    const ScopeGroups* groups = nullptr;
    std::vector<double> values;
    std::vector<std::size_t> universe_index;  // member -> position in the shared universe
    MeanDifference stat;
    double observed = 0.0;
    bool degenerate = false;
};

// Number of entries in `sorted_abs` reaching `value`.
std::size_t count_reaching(const std::vector<double>& sorted_abs, double value) {
    const double floor = value - 1e-10 * std::max(1.0, std::abs(value));
    return static_cast<std::size_t>(sorted_abs.end() - std::lower_bound(sorted_abs.begin(), sorted_abs.end(), floor));
}

}  // namespace

NpcCombinedResult npc_fisher_combine(std::span<const ScopeGroups> scopes, std::size_t n_perm, std::uint64_t seed,
                                     unsigned threads) {
    if (n_perm == 0) throw AnalysisError("permutation count must be positive");
    NpcCombinedResult out;
    out.seed = seed;

    std::vector<PreparedScope> prepared;
    std::map<std::string, std::size_t> universe;
    for (const auto& g : scopes) {
        const auto k = static_cast<std::size_t>(
            std::count_if(g.members.begin(), g.members.end(), [](const GroupMember& m) { return m.top; }));
        if (k == 0 || k == g.members.size()) {
            out.warnings.push_back("scope '" + g.scope + "' skipped: " + (k == 0 ? "empty top group" : "empty rest group"));
            continue;
        }
        PreparedScope p;
        p.groups = &g;
        double top_sum = 0.0;
        for (const auto& m : g.members) {
            p.values.push_back(m.value);
            if (m.top) top_sum += m.value;
            universe.emplace(m.university, 0);
        }
        p.stat = {std::accumulate(p.values.begin(), p.values.end(), 0.0), p.values.size(), k};
        p.observed = p.stat(top_sum);
        p.degenerate = all_equal(p.values);
        if (p.degenerate) p.observed = 0.0;
        prepared.push_back(std::move(p));
    }
    if (prepared.size() < 2)
        throw AnalysisError("combined test needs at least two scopes with valid partitions (" +
                            std::to_string(prepared.size()) + " usable)");
    {
        std::size_t pos = 0;
        for (auto& [id, index] : universe) index = pos++;
    }
    for (auto& p : prepared)
        for (const auto& m : p.groups->members) p.universe_index.push_back(universe.at(m.university));

    const std::size_t scopes_n = prepared.size();
    std::size_t joint = 1;
    std::vector<std::size_t> per_scope(scopes_n);
    for (std::size_t s = 0; s < scopes_n; ++s) {
        per_scope[s] = binomial_capped(prepared[s].stat.n, prepared[s].stat.k, n_perm);
        joint = per_scope[s] > n_perm ? n_perm + 1 : std::min(joint * per_scope[s], n_perm + 1);
    }

    std::vector<double> partial_p(scopes_n);
    if (joint <= n_perm) {
        // Exhaustive: the joint space is the product of per-scope relabelings.
        std::vector<std::vector<double>> log_lambda(scopes_n);
        std::vector<double> observed_log_lambda(scopes_n);
        for (std::size_t s = 0; s < scopes_n; ++s) {
            const auto& p = prepared[s];
            std::vector<double> abs_stats;
            for_each_combination(p.stat.n, p.stat.k, [&](const std::vector<std::size_t>& idx) {
                double sum = 0.0;
                for (std::size_t i : idx) sum += p.values[i];
                abs_stats.push_back(p.degenerate ? 0.0 : std::abs(p.stat(sum)));
            });
            std::vector<double> sorted = abs_stats;
            std::sort(sorted.begin(), sorted.end());
            const auto total = static_cast<double>(abs_stats.size());
            for (double a : abs_stats) log_lambda[s].push_back(std::log(count_reaching(sorted, a) / total));
            partial_p[s] = count_reaching(sorted, std::abs(p.observed)) / total;
            observed_log_lambda[s] = std::log(partial_p[s]);
        }
        const double observed_fisher =
            -2.0 * std::accumulate(observed_log_lambda.begin(), observed_log_lambda.end(), 0.0);
        std::size_t hits = 0;
        std::vector<std::size_t> digit(scopes_n, 0);
        for (std::size_t b = 0; b < joint; ++b) {
            double fisher = 0.0;
            for (std::size_t s = 0; s < scopes_n; ++s) fisher += log_lambda[s][digit[s]];
            if (reaches(-2.0 * fisher, observed_fisher)) ++hits;
            for (std::size_t s = 0; s < scopes_n; ++s) {
                if (++digit[s] < per_scope[s]) break;
                digit[s] = 0;
            }
        }
        out.exhaustive = true;
        out.permutations = joint;
        out.combined_statistic = observed_fisher;
        out.combined_p = static_cast<double>(hits) / static_cast<double>(joint);
    } else {
        // stats[s][b]: |T| of scope s at iteration b; b = 0 is the observed labeling.
        const std::size_t rows = n_perm + 1;
        std::vector<std::vector<double>> abs_stats(scopes_n, std::vector<double>(rows));
        for (std::size_t s = 0; s < scopes_n; ++s) abs_stats[s][0] = std::abs(prepared[s].observed);

        const std::size_t chunks = std::min<std::size_t>(n_perm, 64);
        parallel_for(chunks, threads, [&](std::size_t c) {
            std::vector<std::uint64_t> keys(universe.size());
            std::vector<std::pair<std::uint64_t, std::size_t>> order;
            for (std::size_t b = 1 + c; b <= n_perm; b += chunks) {
                auto rng = SplitMix64::stream(seed, b);
                for (auto& key : keys) key = rng();
                for (std::size_t s = 0; s < scopes_n; ++s) {
                    const auto& p = prepared[s];
                    if (p.degenerate) {
                        abs_stats[s][b] = 0.0;
                        continue;
                    }
                    order.clear();
                    for (std::size_t m = 0; m < p.values.size(); ++m) order.emplace_back(keys[p.universe_index[m]], m);
                    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.stat.k) - 1,
                                     order.end());
                    // nth_element leaves the k smallest in front, unordered; sum in index order.
                    std::vector<std::size_t> chosen;
                    chosen.reserve(p.stat.k);
                    for (std::size_t i = 0; i < p.stat.k; ++i) chosen.push_back(order[i].second);
                    std::sort(chosen.begin(), chosen.end());
                    double sum = 0.0;
                    for (std::size_t m : chosen) sum += p.values[m];
                    abs_stats[s][b] = std::abs(p.stat(sum));
                }
            }
        });

        std::vector<double> fisher(rows, 0.0);
        for (std::size_t s = 0; s < scopes_n; ++s) {
            std::vector<double> sorted = abs_stats[s];
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t b = 0; b < rows; ++b) {
                const double lambda =
                    static_cast<double>(count_reaching(sorted, abs_stats[s][b])) / static_cast<double>(rows);
                fisher[b] += -2.0 * std::log(lambda);
            }
            // Equals (#{b >= 1 reaching observed} + 1) / (B + 1).
            partial_p[s] = static_cast<double>(count_reaching(sorted, abs_stats[s][0])) / static_cast<double>(rows);
        }
        std::size_t hits = 0;
        for (std::size_t b = 1; b < rows; ++b)
            if (reaches(fisher[b], fisher[0])) ++hits;
        out.permutations = n_perm;
        out.combined_statistic = fisher[0];
        out.combined_p = static_cast<double>(hits + 1) / static_cast<double>(rows);
    }

    int balance = 0;
    for (std::size_t s = 0; s < scopes_n; ++s) {
        const auto& p = prepared[s];
        PermTestResult r;
        r.scope = p.groups->scope;
        r.observed = p.observed;
        r.p_value = partial_p[s];
        r.direction = direction_of(p.observed);
        r.permutations = out.exhaustive ? per_scope[s] : n_perm;
        r.seed = seed;
        r.exhaustive = out.exhaustive;
        r.degenerate = p.degenerate;
        if (r.direction == Direction::Less) --balance;
        if (r.direction == Direction::Greater) ++balance;
        out.partials.push_back(std::move(r));
    }
    out.direction = balance < 0 ? Direction::Less : balance > 0 ? Direction::Greater : Direction::Equal;
    return out;
}

}  // namespace citewin
