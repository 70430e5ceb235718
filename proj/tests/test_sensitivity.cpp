#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "citewin/error.hpp"
#include "citewin/sensitivity.hpp"
#include "citewin/stats.hpp"

using namespace citewin;

namespace {

// Ranking with exactly the given competition ranks (lower = better).
Ranking ranked(const std::map<std::string, int>& ranks, int year = 0) {
    Ranking r;
    r.scope = "S";
    r.obs_year = year;
    for (const auto& [u, rank] : ranks) r.entries.push_back({u, -static_cast<double>(rank), rank, double(rank)});
    std::sort(r.entries.begin(), r.entries.end(),
              [](const RankEntry& a, const RankEntry& b) { return std::tie(a.rank, a.university) < std::tie(b.rank, b.university); });
    return r;
}

// Independent oracle: average rank by counting, then textbook Pearson.
double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<long double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            long double greater = 0, equal = 0;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (v[j] > v[i]) greater += 1;
                if (j != i && v[j] == v[i]) equal += 1;
            }
            r[i] = 1 + greater + equal / 2;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const long double n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i], my += ry[i];
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace

TEST_CASE("competition and fractional ranks") {
    const auto strict = rank_universities({{"A", 2.0}, {"B", 1.0}, {"C", 0.5}});
    CHECK(strict.find("A")->rank == 1);
    CHECK(strict.find("B")->rank == 2);
    CHECK(strict.find("C")->rank == 3);

    const auto tied = rank_universities({{"A", 1.0}, {"B", 1.0}, {"C", 0.5}});
    CHECK(tied.find("A")->rank == 1);
    CHECK(tied.find("B")->rank == 1);
    CHECK(tied.find("C")->rank == 3);
    CHECK(tied.find("A")->fractional_rank == 1.5);
    CHECK(tied.find("B")->fractional_rank == 1.5);
    CHECK(tied.find("C")->fractional_rank == 3.0);
    CHECK(tied.entries[0].university == "A");

    CHECK(rank_universities({{"Z", 0.0}}).entries.front().rank == 1);
    CHECK_THROWS_AS(rank_universities({}), AnalysisError);
    CHECK_THROWS_AS(rank_universities({{"A", std::nan("")}}), AnalysisError);
}

TEST_CASE("rank shifts") {
    const auto base = ranked({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}, {"E", 5}});
    for (const auto& [u, s] : rank_shifts(base, base)) CHECK(s.absolute == 0);

    const auto moved = ranked({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 5}, {"E", 4}});
    const auto shifts = rank_shifts(moved, base);
    CHECK(shifts.at("D").signed_shift == 1);
    CHECK(shifts.at("D").absolute == 1);
    CHECK(shifts.at("E").signed_shift == -1);

    std::map<std::string, int> year, bench;
    for (int i = 1; i <= 50; ++i) year["U" + std::to_string(i)] = bench["U" + std::to_string(i)] = i;
    year["BZ"] = 43;
    bench["BZ"] = 12;
    CHECK(rank_shifts(ranked(year), ranked(bench)).at("BZ").absolute == 31);

    try {
        (void)rank_shifts(ranked({{"A", 1}, {"B", 2}}), ranked({{"A", 1}, {"C", 2}}));
        FAIL("expected mismatch");
    } catch (const AnalysisError& e) {
        const std::string msg = e.what();
        CHECK(msg.find('B') != std::string::npos);
        CHECK(msg.find('C') != std::string::npos);
    }
}

TEST_CASE("shift descriptives") {
    const std::vector<double> zeros{0, 0, 0, 0};
    const auto z = shift_descriptives(zeros);
    CHECK(z.mean == 0.0);
    CHECK(z.median == 0.0);
    CHECK(z.std_dev == 0.0);
    CHECK_FALSE(z.skewness.has_value());
    CHECK_FALSE(z.kurtosis.has_value());

    // Oracle values from exact fractions: m2 = 74/25, m3 = 1236/125, m4 = 32018/625.
    const std::vector<double> v{0, 1, 1, 2, 5};
    const auto s = shift_descriptives(v);
    CHECK(s.n == 5);
    CHECK(s.mean == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(s.median == 1.0);
    CHECK(s.std_dev == doctest::Approx(1.7204650534085253).epsilon(1e-12));
    REQUIRE(s.skewness);
    CHECK(*s.skewness == doctest::Approx(1.0179522960269582).epsilon(1e-12));
    REQUIRE(s.kurtosis);
    CHECK(*s.kurtosis == doctest::Approx(-0.3480642804967129).epsilon(1e-12));

    const std::vector<double> sym{0, 1, 2, 3, 4};
    CHECK(std::abs(*shift_descriptives(sym).skewness) < 1e-15);
    const std::vector<double> even{4, 1, 3, 2};
    CHECK(shift_descriptives(even).median == 2.5);
}

TEST_CASE("descriptives match a brute-force moment oracle") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v(2 + rng() % 30);
        for (auto& x : v) x = static_cast<double>(rng() % 12);
        long double mean = 0;
        for (double x : v) mean += x;
        mean /= v.size();
        long double m2 = 0, m3 = 0, m4 = 0;
        for (double x : v) {
            const long double d = x - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= v.size();
        m3 /= v.size();
        m4 /= v.size();
        const auto s = shift_descriptives(v);
        CHECK(s.std_dev == doctest::Approx(static_cast<double>(std::sqrt(m2))).epsilon(1e-12));
        if (m2 > 0) {
            CHECK(*s.skewness == doctest::Approx(static_cast<double>(m3 / std::pow(m2, 1.5L))).epsilon(1e-9));
            CHECK(*s.kurtosis == doctest::Approx(static_cast<double>(m4 / (m2 * m2) - 3)).epsilon(1e-9));
        }
    }
}

TEST_CASE("Spearman examples") {
    const auto a = ranked({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}});
    const auto rev = ranked({{"A", 4}, {"B", 3}, {"C", 2}, {"D", 1}});
    CHECK(*spearman_rho(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*spearman_rho(a, rev) == doctest::Approx(-1.0).epsilon(1e-15));

    const auto flat = rank_universities({{"A", 1.0}, {"B", 1.0}, {"C", 1.0}});
    const auto abc = rank_universities({{"A", 1.0}, {"B", 2.0}, {"C", 3.0}});
    CHECK_FALSE(spearman_rho(flat, abc).has_value());
    CHECK_THROWS_AS(spearman_rho(ranked({{"A", 1}}), ranked({{"A", 1}})), AnalysisError);
    CHECK_THROWS_AS(spearman_rho(ranked({{"A", 1}, {"B", 2}}), ranked({{"A", 1}, {"C", 2}})), AnalysisError);

    // Six universities, one tie pair.
    const std::map<std::string, double> x{{"A", 6}, {"B", 5}, {"C", 5}, {"D", 3}, {"E", 2}, {"F", 1}};
    const std::map<std::string, double> y{{"A", 5}, {"B", 6}, {"C", 3}, {"D", 4}, {"E", 1}, {"F", 2}};
    std::vector<double> xv, yv;
    for (const auto& [u, v] : x) xv.push_back(v), yv.push_back(y.at(u));
    CHECK(std::abs(*spearman_rho(rank_universities(x), rank_universities(y)) - oracle_spearman(xv, yv)) <= 1e-12);
}

TEST_CASE("Spearman equals the brute-force oracle and is symmetric") {
    std::mt19937_64 rng(99);
    int compared = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng() % 9;
        std::map<std::string, double> x, y;
        std::vector<double> xv, yv;
        for (std::size_t i = 0; i < n; ++i) {
            const auto u = "U" + std::to_string(i);
            x[u] = static_cast<double>(rng() % 5);
            y[u] = static_cast<double>(rng() % 5);
        }
        for (const auto& [u, v] : x) xv.push_back(v), yv.push_back(y.at(u));
        const auto rx = rank_universities(x), ry = rank_universities(y);
        const auto rho = spearman_rho(rx, ry);
        const bool constant_x = std::all_of(xv.begin(), xv.end(), [&](double v) { return v == xv[0]; });
        const bool constant_y = std::all_of(yv.begin(), yv.end(), [&](double v) { return v == yv[0]; });
        if (constant_x || constant_y) {
            CHECK_FALSE(rho.has_value());
            continue;
        }
        REQUIRE(rho);
        CHECK(std::abs(*rho - oracle_spearman(xv, yv)) <= 1e-12);
        CHECK(*spearman_rho(ry, rx) == *rho);
        CHECK(*rho >= -1.0);
        CHECK(*rho <= 1.0);
        ++compared;
    }
    CHECK(compared > 900);
}

TEST_CASE("stability summary") {
    SUBCASE("identical rankings") {
        std::vector<Ranking> years;
        for (int y = 2004; y <= 2008; ++y) years.push_back(ranked({{"A", 1}, {"B", 2}, {"C", 3}}, y));
        const auto s = stability_summary(years, 2008);
        CHECK(s.share_changed == 0.0);
        CHECK(s.average == 0.0);
        CHECK(s.median == 0.0);
        CHECK(s.std_dev == 0.0);
        CHECK(s.max_ranking_variation == 0);
    }
    SUBCASE("one university ranked 5,3,4,4,4") {
        const int x[] = {5, 3, 4, 4, 4};
        std::vector<Ranking> years;
        for (int i = 0; i < 5; ++i)
            years.push_back(ranked({{"A", 1}, {"B", 2}, {"C", 3}, {"X", x[i]}, {"Z", 6}}, 2004 + i));
        const auto s = stability_summary(years, 2008);
        CHECK(s.universities == 5);
        CHECK(s.share_changed == doctest::Approx(0.2));
        CHECK(s.max_ranking_variation == 2);
        // X mean shift over the four comparisons: (1 + 1 + 0 + 0) / 4.
        CHECK(s.average == doctest::Approx(0.5 / 5));
        const auto ranges = rank_ranges(years);
        const auto it = std::find_if(ranges.begin(), ranges.end(), [](const RankRange& r) { return r.university == "X"; });
        CHECK(it->min_rank == 3);
        CHECK(it->max_rank == 5);
        CHECK(it->ranks.at(2004) == 5);
    }
    CHECK_THROWS_AS(stability_summary(std::vector<Ranking>{ranked({{"A", 1}, {"B", 2}}, 2004)}, 2008), AnalysisError);
}

TEST_CASE("summary average equals the mean of yearly mean shifts") {
    // Arithmetic identity behind the published Chemistry figures.
    CHECK((2.707 + 1.879 + 1.448 + 0.896) / 4 == doctest::Approx(1.7325));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 3 + rng() % 20;
        std::vector<Ranking> years;
        for (int y = 2004; y <= 2008; ++y) {
            std::map<std::string, double> scores;
            for (std::size_t i = 0; i < n; ++i) scores["U" + std::to_string(i)] = static_cast<double>(rng() % 7);
            years.push_back(rank_universities(scores, "S", y));
        }
        double sum_of_means = 0;
        for (std::size_t y = 0; y + 1 < years.size(); ++y) {
            std::vector<double> shifts;
            for (const auto& [u, s] : rank_shifts(years[y], years.back())) shifts.push_back(s.absolute);
            sum_of_means += shift_descriptives(shifts).mean;
        }
        CHECK(stability_summary(years, 2008).average == doctest::Approx(sum_of_means / 4).epsilon(1e-12));
    }
}

TEST_CASE("small shift shares") {
    const auto bench = ranked({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}, {"E", 5}, {"F", 6}});
    const auto same = small_shift_shares(bench, bench);
    CHECK(same.no_change_pct() == 100);
    CHECK(same.at_most_three_pct() == 100);

    // Shifts {0, 1, 4} on three universities.
    const auto b3 = ranked({{"A", 1}, {"B", 2}, {"C", 6}});
    const auto y3 = ranked({{"A", 1}, {"B", 3}, {"C", 2}});
    const auto s = small_shift_shares(y3, b3);
    CHECK(s.no_change_pct() == 33);
    CHECK(s.at_most_three_pct() == 67);

    const auto far_b = ranked({{"A", 1}, {"B", 5}});
    const auto far_y = ranked({{"A", 5}, {"B", 1}});
    const auto f = small_shift_shares(far_y, far_b);
    CHECK(f.no_change_pct() == 0);
    CHECK(f.at_most_three_pct() == 0);
}

TEST_CASE("quartile classes") {
    std::map<std::string, double> octet;
    for (int i = 0; i < 8; ++i) octet["U" + std::to_string(i)] = i * 1.5;
    std::map<int, int> per_class;
    for (const auto& [u, c] : quartile_classes(octet)) ++per_class[c];
    CHECK(per_class == std::map<int, int>{{1, 2}, {2, 2}, {3, 2}, {4, 2}});

    const auto flat = quartile_classes({{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}, {"E", 1}});
    for (const auto& [u, c] : flat) CHECK(c == flat.begin()->second);

    const auto tied = quartile_classes({{"A", 1}, {"B", 2}, {"C", 2}, {"D", 3}, {"E", 9}});
    CHECK(tied.at("B") == tied.at("C"));
    CHECK(tied.at("E") == 4);
    CHECK(tied.at("A") == 1);

    CHECK_THROWS_AS(quartile_classes({{"A", 1}, {"B", 2}, {"C", 3}}), AnalysisError);
}

TEST_CASE("quartile shift statistics") {
    QuartileAssignment bench, moved;
    for (int i = 0; i < 10; ++i) bench["U" + std::to_string(i)] = 1 + i % 4;
    moved = bench;
    bench["U3"] = 4;
    moved["U3"] = 1;
    const auto same = quartile_shift_stats({{2007, bench}, {2008, bench}}, 2008);
    REQUIRE(same.size() == 1);
    CHECK(same[0].average_shift == 0.0);
    CHECK(same[0].outliers == 0);

    const auto stats = quartile_shift_stats({{2004, moved}, {2008, bench}}, 2008);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].year == 2004);
    CHECK(stats[0].average_shift == doctest::Approx(0.3));
    CHECK(stats[0].outliers == 1);
    CHECK(stats[0].histogram == std::array<std::size_t, 4>{9, 0, 0, 1});
}

TEST_CASE("quartile shifts never exceed three on random scores") {
    std::mt19937_64 rng(17);
    std::lognormal_distribution<double> score(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 4 + rng() % 40;
        std::map<int, QuartileAssignment> by_year;
        for (int y = 2004; y <= 2008; ++y) {
            std::map<std::string, double> scores;
            for (std::size_t i = 0; i < n; ++i)
                scores["U" + std::to_string(i)] = (rng() % 5 == 0) ? 1.0 : score(rng);
            by_year[y] = quartile_classes(scores);
        }
        for (const auto& q : quartile_shift_stats(by_year, 2008)) {
            std::size_t total = 0;
            for (auto h : q.histogram) total += h;
            CHECK(total == n);
            CHECK(q.outliers == q.histogram[2] + q.histogram[3]);
            CHECK(q.average_shift <= 3.0);
        }
    }
}

TEST_CASE("stats helpers") {
    CHECK(stats::median({3, 1, 2}) == 2.0);
    CHECK(stats::median({0, 0, 3, 5}) == 1.5);
    CHECK(stats::quantile_linear({1, 2, 3, 4, 100}, 0.8) == doctest::Approx(23.2));
    CHECK(stats::quantile_linear({5}, 0.3) == 5.0);
    const std::vector<double> v{3, 1, 3, 2};
    CHECK(stats::fractional_ranks_descending(v) == std::vector<double>{1.5, 4, 1.5, 3});
}
