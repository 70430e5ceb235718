#include <doctest.h>

#include <cmath>
#include <random>

#include "citewin/error.hpp"
#include "citewin/impact.hpp"
#include "citewin/ingestion.hpp"
#include "citewin/productivity.hpp"
#include "citewin/synth.hpp"
#include "test_support.hpp"

using namespace citewin;

namespace {

ProductivityCell cell(std::string university, std::string sds, double ss, std::size_t rs) {
    return *sds_productivity({std::move(university), std::move(sds)}, 2008, ss, rs);
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

TEST_CASE("scientific strength sums AII over the cell") {
    const auto c = Corpus::build({{"P1", 2002, {{"A", 1.0}}, {{2008, 0}}},
                                  {"P2", 2002, {{"A", 1.0}}, {{2008, 0}}},
                                  {"P3", 2002, {{"A", 1.0}}, {{2008, 0}}},
                                  {"P4", 2002, {{"A", 1.0}}, {{2008, 0}}}},
                                 {{"R1", "U1", "S1"}, {"R2", "U2", "S1"}, {"R3", "U3", "S1"}},
                                 {{"P1", "R1"}, {"P2", "R1"}, {"P3", "R1"}, {"P4", "R2"}, {"P4", "R1"}},
                                 {{"S1", "A1"}});
    const std::vector<double> aii{1.0, 0.5, 0.0, 2.0};
    CHECK(scientific_strength(c, {"U3", "S1"}, {2001, 2003}, aii) == 0.0);
    CHECK(scientific_strength(c, {"U9", "S1"}, {2001, 2003}, aii) == 0.0);
    CHECK(scientific_strength(c, {"U2", "S1"}, {2001, 2003}, aii) == 2.0);
    CHECK(scientific_strength(c, {"U1", "S1"}, {2001, 2003}, aii) == 3.5);
    CHECK(scientific_strength(c, {"U1", "S1"}, {2003, 2003}, aii) == 0.0);
}

TEST_CASE("SS of three publications with AII 1, 0.5 and 0") {
    const auto c = Corpus::build({{"P1", 2002, {{"A", 1.0}}, {{2008, 2}}},
                                  {"P2", 2002, {{"A", 1.0}}, {{2008, 1}}},
                                  {"P3", 2002, {{"A", 1.0}}, {{2008, 0}}},
                                  {"P4", 2002, {{"A", 1.0}}, {{2008, 3}}}},
                                 {{"R1", "U1", "S1"}, {"R2", "U2", "S1"}},
                                 {{"P1", "R1"}, {"P2", "R1"}, {"P3", "R1"}, {"P4", "R2"}}, {{"S1", "A1"}});
    // Cited counts {2, 1, 3}: median 2.
    const auto medians = compute_median_table(c, 2008);
    CHECK(scientific_strength(c, {"U1", "S1"}, {2001, 2003}, 2008, medians) == 1.5);
}

TEST_CASE("a publication shared by two universities counts fully for both") {
    const auto c = Corpus::build({{"P1", 2002, {{"A", 1.0}}, {{2008, 4}}}, {"P2", 2002, {{"A", 1.0}}, {{2008, 2}}}},
                                 {{"R1", "U1", "S1"}, {"R2", "U2", "S1"}, {"R3", "U3", "S1"}},
                                 {{"P1", "R1"}, {"P1", "R2"}, {"P2", "R3"}}, {{"S1", "A1"}});
    MedianTable t;
    t.set({2002, "A", 2008}, 2.0);
    CHECK(scientific_strength(c, {"U1", "S1"}, {2001, 2003}, 2008, t) == 2.0);
    CHECK(scientific_strength(c, {"U2", "S1"}, {2001, 2003}, 2008, t) == 2.0);
}

TEST_CASE("SDS productivity") {
    CHECK(round3(cell("U", "MAT/02", 4.128, 13).productivity) == doctest::Approx(0.318));
    CHECK(round3(cell("U", "MAT/05", 33.791, 60).productivity) == doctest::Approx(0.563));
    CHECK(cell("U", "S", 0.0, 5).productivity == 0.0);
    CHECK_FALSE(sds_productivity({"U", "S"}, 2008, 1.0, 0).has_value());
}

TEST_CASE("national baseline") {
    SUBCASE("aggregate of two universities") {
        const std::vector cells{cell("U1", "S", 2, 2), cell("U2", "S", 4, 2)};
        const auto b = national_baseline("S", 2008, cells);
        REQUIRE(b);
        CHECK(b->value == 1.5);
        CHECK(b->active_universities == 2);
    }
    SUBCASE("single university") {
        const std::vector cells{cell("U1", "S", 3, 3)};
        CHECK(national_baseline("S", 2008, cells)->value == 1.0);
    }
    SUBCASE("all strengths zero") {
        const std::vector cells{cell("U1", "S", 0, 3), cell("U2", "S", 0, 1)};
        CHECK(national_baseline("S", 2008, cells)->value == 0.0);
    }
    SUBCASE("no active university") {
        CHECK_FALSE(national_baseline("S", 2008, std::span<const ProductivityCell>{}).has_value());
    }
    SUBCASE("unweighted mean rule") {
        const std::vector cells{cell("U1", "S", 1, 1), cell("U2", "S", 4, 4), cell("U3", "S", 0, 5)};
        CHECK(national_baseline("S", 2008, cells, BaselineRule::Aggregate)->value == doctest::Approx(0.5));
        CHECK(national_baseline("S", 2008, cells, BaselineRule::UnweightedMean)->value ==
              doctest::Approx(2.0 / 3.0));
    }
    CHECK(parse_baseline_rule("mean") == BaselineRule::UnweightedMean);
    CHECK(parse_baseline_rule("aggregate") == BaselineRule::Aggregate);
    CHECK_FALSE(parse_baseline_rule("median").has_value());
}

TEST_CASE("Table 2 from its published p and p-bar columns") {
    // p rounded to three decimals, as printed.
    const std::vector<double> p{0.318, 0.252, 0.563, 0.768, 0.608, 0.470, 0.337, 0.357};
    std::vector<ProductivityCell> cells;
    std::map<std::string, NationalBaseline> baselines;
    const auto& rows = testing::table2_rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cells.push_back(cell("NAPLES", rows[i].sds, p[i] * static_cast<double>(rows[i].staff), rows[i].staff));
        baselines[rows[i].sds] = {rows[i].sds, 2008, rows[i].baseline, 2};
    }
    const auto result = uda_productivity("NAPLES", "MATH", cells, baselines);
    CHECK(result.staff == 162);
    CHECK(std::abs(result.score - testing::kTable2Total) <= 0.001);
    REQUIRE(result.contributions.size() == rows.size());
    for (const auto& row : rows) {
        const auto it = std::find_if(result.contributions.begin(), result.contributions.end(),
                                     [&](const SdsContribution& c) { return c.sds == row.sds; });
        REQUIRE(it != result.contributions.end());
        CHECK(std::abs(it->value - row.contribution) <= 0.001);
    }
}

TEST_CASE("Table 2 from its RS and SS columns") {
    std::vector<ProductivityCell> cells;
    std::map<std::string, NationalBaseline> baselines;
    for (const auto& row : testing::table2_rows()) {
        cells.push_back(cell("NAPLES", row.sds, row.strength, row.staff));
        baselines[row.sds] = {row.sds, 2008, row.baseline, 2};
    }
    const auto result = uda_productivity("NAPLES", "MATH", cells, baselines);
    CHECK(std::abs(result.score - 0.576) <= 0.001);
    const auto mat05 = std::find_if(result.contributions.begin(), result.contributions.end(),
                                    [](const SdsContribution& c) { return c.sds == "MAT/05"; });
    CHECK(std::abs(mat05->value - 0.226) <= 0.001);
}

TEST_CASE("single SDS at the national level scores 1") {
    const std::vector cells{cell("U", "S", 3.0, 4)};
    const std::map<std::string, NationalBaseline> baselines{{"S", {"S", 2008, 0.75, 5}}};
    CHECK(uda_productivity("U", "A", cells, baselines).score == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero baselines") {
    const std::map<std::string, NationalBaseline> baselines{{"S", {"S", 2008, 0.0, 2}}, {"T", {"T", 2008, 1.0, 2}}};
    const std::vector ok{cell("U", "S", 0.0, 2), cell("U", "T", 2.0, 2)};
    const auto r = uda_productivity("U", "A", ok, baselines);
    CHECK(r.score == doctest::Approx(0.5));
    CHECK(r.contributions[0].undefined);
    CHECK(r.contributions[0].value == 0.0);

    const std::vector bad{cell("U", "S", 1.0, 2)};
    CHECK_THROWS_AS(uda_productivity("U", "A", bad, baselines), AnalysisError);
    const std::vector missing{cell("U", "Q", 1.0, 2)};
    CHECK_THROWS_AS(uda_productivity("U", "A", missing, baselines), AnalysisError);
    CHECK_THROWS_AS(uda_productivity("U", "A", std::span<const ProductivityCell>{}, baselines), AnalysisError);
}

TEST_CASE("RS-weighted national mean of P is 1 under the aggregate rule") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto config = default_synth_config();
        config.seed = seed;
        config.n_universities = 12;
        const auto g = generate_records(config);
        const auto corpus = testing::build(g);
        const auto retained = representativity_filter(corpus, config.pub_period, 0.0).retained_sds();
        for (int year : config.obs_years) {
            const auto run = compute_productivity(corpus, retained, config.pub_period, year);
            std::map<std::string, std::pair<double, double>> acc;
            for (const auto& u : run.uda) {
                acc[u.uda].first += u.score * static_cast<double>(u.staff);
                acc[u.uda].second += static_cast<double>(u.staff);
            }
            for (const auto& [uda, sums] : acc) CHECK(std::abs(sums.first / sums.second - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("productivity run on the small fixture") {
    const auto corpus = load_corpus(testing::data_dir() / "small");
    const auto run = compute_productivity(corpus, {"SDS_A", "SDS_B"}, {2001, 2003}, 2008);
    // Medians at 2008: (2002, CAT_X) over {6, 4} = 5; (2002, CAT_Y) = 4; (2003, CAT_Y) = 3.
    // AII: P1 = 6/5, P2 = 0.5*4/5 + 0.5*4/4 = 0.9, P3 = 1.
    // SDS_A: U1 {P1} = 1.2, U2 {P1, P3} = 2.2, baseline 3.4 / 2 = 1.7.
    // SDS_B: U1 {P2} = 0.9, U2 {P3} = 1.0, baseline 1.9 / 2 = 0.95.
    REQUIRE(run.cells.size() == 4);
    CHECK(run.cells[0].strength == doctest::Approx(1.2));
    CHECK(run.cells[1].strength == doctest::Approx(2.2));
    CHECK(run.baselines.at("SDS_A").value == doctest::Approx(1.7));
    CHECK(run.baselines.at("SDS_B").value == doctest::Approx(0.95));
    const auto scores = run.uda_scores().at("UDA1");
    CHECK(scores.at("U1") == doctest::Approx(0.5 * 1.2 / 1.7 + 0.5 * 0.9 / 0.95));
    CHECK(scores.at("U2") == doctest::Approx(0.5 * 2.2 / 1.7 + 0.5 * 1.0 / 0.95));
    CHECK(run.sds_scores().at("SDS_A").at("U2") == doctest::Approx(2.2));
}
