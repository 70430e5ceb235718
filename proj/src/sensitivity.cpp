#include "citewin/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "citewin/error.hpp"
#include "citewin/stats.hpp"

namespace citewin {

namespace {

std::string describe_mismatch(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::string only_a, only_b;
    for (const auto& u : a)
        if (!b.contains(u)) only_a += (only_a.empty() ? "" : ", ") + u;
    for (const auto& u : b)
        if (!a.contains(u)) only_b += (only_b.empty() ? "" : ", ") + u;
    return "university sets differ; only in first: [" + only_a + "], only in second: [" + only_b + "]";
}

void require_same_universities(const Ranking& a, const Ranking& b) {
    const auto ua = a.universities();
    const auto ub = b.universities();
    if (ua != ub) throw AnalysisError(describe_mismatch(ua, ub));
}

const Ranking& find_year(std::span<const Ranking> rankings, int year) {
    for (const auto& r : rankings)
        if (r.obs_year == year) return r;
    throw AnalysisError("no ranking for benchmark year " + std::to_string(year));
}

}  // namespace

const RankEntry* Ranking::find(const std::string& university) const {
    for (const auto& e : entries)
        if (e.university == university) return &e;
    return nullptr;
}

std::set<std::string> Ranking::universities() const {
    std::set<std::string> out;
    for (const auto& e : entries) out.insert(e.university);
    return out;
}

Ranking rank_universities(const std::map<std::string, double>& scores, std::string scope, int obs_year) {
    if (scores.empty()) throw AnalysisError("cannot rank an empty set of universities");
    Ranking ranking;
    ranking.scope = std::move(scope);
    ranking.obs_year = obs_year;
    for (const auto& [university, score] : scores) {
        if (!std::isfinite(score)) throw AnalysisError("non-finite score for university '" + university + "'");
        ranking.entries.push_back({university, score, 0, 0.0});
    }
    // std::map iteration gives id order, so stable_sort keeps ties by id.
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.score > b.score; });
    auto& e = ranking.entries;
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t j = i;
        while (j + 1 < e.size() && e[j + 1].score == e[i].score) ++j;
        const double fractional = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            e[k].rank = static_cast<int>(i + 1);
            e[k].fractional_rank = fractional;
        }
        i = j + 1;
    }
    return ranking;
}

std::map<std::string, RankShift> rank_shifts(const Ranking& year, const Ranking& benchmark) {
    require_same_universities(year, benchmark);
    std::map<std::string, RankShift> out;
    for (const auto& e : year.entries) {
        const int shift = e.rank - benchmark.find(e.university)->rank;
        out[e.university] = {shift, std::abs(shift)};
    }
    return out;
}

ShiftStats shift_descriptives(std::span<const double> shifts) {
    if (shifts.empty()) throw AnalysisError("shift descriptives need at least one value");
    ShiftStats s;
    s.n = shifts.size();
    const auto m = stats::central_moments(shifts);
    s.mean = m.mean;
    s.median = stats::median({shifts.begin(), shifts.end()});
    s.std_dev = std::sqrt(m.m2);
    if (m.m2 > 0.0) {
        s.skewness = m.m3 / std::pow(m.m2, 1.5);
        s.kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
    }
    return s;
}

std::optional<double> spearman_rho(const Ranking& a, const Ranking& b) {
    require_same_universities(a, b);
    if (a.entries.size() < 2) throw AnalysisError("rank correlation needs at least two universities");
    // Pair ranks in university-id order so the result is symmetric.
    std::map<std::string, std::pair<double, double>> paired;
    for (const auto& e : a.entries) paired[e.university].first = e.fractional_rank;
    for (const auto& e : b.entries) paired[e.university].second = e.fractional_rank;
    std::vector<double> x, y;
    x.reserve(paired.size());
    y.reserve(paired.size());
    for (const auto& [u, ranks] : paired) {
        x.push_back(ranks.first);
        y.push_back(ranks.second);
    }
    return stats::pearson(x, y);
}

StabilitySummary stability_summary(std::span<const Ranking> rankings, int benchmark_year) {
    const Ranking& benchmark = find_year(rankings, benchmark_year);
    for (const auto& r : rankings) require_same_universities(r, benchmark);

    StabilitySummary out;
    out.scope = benchmark.scope;
    out.universities = benchmark.entries.size();

    std::vector<double> mean_shifts;
    std::size_t changed = 0;
    for (const auto& bench_entry : benchmark.entries) {
        int lo = bench_entry.rank;
        int hi = bench_entry.rank;
        double total = 0.0;
        std::size_t comparisons = 0;
        for (const auto& r : rankings) {
            const int rank = r.find(bench_entry.university)->rank;
            lo = std::min(lo, rank);
            hi = std::max(hi, rank);
            if (r.obs_year == benchmark_year) continue;
            total += std::abs(rank - bench_entry.rank);
            ++comparisons;
        }
        if (hi != lo) ++changed;
        out.max_ranking_variation = std::max(out.max_ranking_variation, hi - lo);
        mean_shifts.push_back(comparisons ? total / static_cast<double>(comparisons) : 0.0);
    }
    out.share_changed = static_cast<double>(changed) / static_cast<double>(out.universities);
    const auto m = stats::central_moments(mean_shifts);
    out.average = m.mean;
    out.median = stats::median(mean_shifts);
    out.std_dev = std::sqrt(m.m2);
    return out;
}

int SmallShiftShares::no_change_pct() const { return static_cast<int>(std::lround(no_change * 100.0)); }
int SmallShiftShares::at_most_three_pct() const { return static_cast<int>(std::lround(at_most_three * 100.0)); }

SmallShiftShares small_shift_shares(const Ranking& year, const Ranking& benchmark) {
    const auto shifts = rank_shifts(year, benchmark);
    std::size_t none = 0, small = 0;
    for (const auto& [u, s] : shifts) {
        if (s.absolute == 0) ++none;
        if (s.absolute <= 3) ++small;
    }
    const auto n = static_cast<double>(shifts.size());
    return {static_cast<double>(none) / n, static_cast<double>(small) / n};
}

QuartileAssignment quartile_classes(const std::map<std::string, double>& scores) {
    if (scores.size() < 4) throw AnalysisError("quartile classes need at least four universities");
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& [u, s] : scores) values.push_back(s);
    const double q25 = stats::quantile_linear(values, 0.25);
    const double q50 = stats::quantile_linear(values, 0.50);
    const double q75 = stats::quantile_linear(values, 0.75);
    QuartileAssignment out;
    for (const auto& [u, s] : scores) out[u] = s > q75 ? 4 : s > q50 ? 3 : s > q25 ? 2 : 1;
    return out;
}

std::vector<QuartileShiftStats> quartile_shift_stats(const std::map<int, QuartileAssignment>& by_year,
                                                     int benchmark_year) {
    auto bench_it = by_year.find(benchmark_year);
    if (bench_it == by_year.end())
        throw AnalysisError("no quartile assignment for benchmark year " + std::to_string(benchmark_year));
    const auto& benchmark = bench_it->second;

    std::vector<QuartileShiftStats> out;
    for (const auto& [year, assignment] : by_year) {
        if (year == benchmark_year) continue;
        if (assignment.size() != benchmark.size())
            throw AnalysisError("quartile assignments for " + std::to_string(year) + " and benchmark differ in size");
        QuartileShiftStats s;
        s.year = year;
        double total = 0.0;
        for (const auto& [u, cls] : assignment) {
            auto b = benchmark.find(u);
            if (b == benchmark.end())
                throw AnalysisError("university '" + u + "' missing from benchmark quartile assignment");
            const int shift = std::abs(cls - b->second);
            if (shift > 3) throw AnalysisError("quartile class outside 1..4 for university '" + u + "'");
            ++s.histogram[static_cast<std::size_t>(shift)];
            if (shift >= 2) ++s.outliers;
            total += shift;
        }
        s.average_shift = assignment.empty() ? 0.0 : total / static_cast<double>(assignment.size());
        out.push_back(s);
    }
    return out;
}

std::vector<RankRange> rank_ranges(std::span<const Ranking> rankings) {
    std::map<std::string, RankRange> by_university;
    for (const auto& r : rankings) {
        for (const auto& e : r.entries) {
            auto& range = by_university[e.university];
            if (range.ranks.empty()) {
                range.university = e.university;
                range.min_rank = range.max_rank = e.rank;
            }
            range.min_rank = std::min(range.min_rank, e.rank);
            range.max_rank = std::max(range.max_rank, e.rank);
            range.ranks[r.obs_year] = e.rank;
        }
    }
    std::vector<RankRange> out;
    for (auto& [u, range] : by_university) out.push_back(std::move(range));
    return out;
}

}  // namespace citewin
