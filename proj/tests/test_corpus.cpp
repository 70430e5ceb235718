#include <doctest.h>

#include <algorithm>
#include <random>

#include "citewin/corpus.hpp"
#include "citewin/error.hpp"
#include "test_support.hpp"

using namespace citewin;

namespace {

PublicationRecord pub(std::string id, int year, std::map<int, std::int64_t> citations) {
    return {std::move(id), year, {{"CAT", 1.0}}, std::move(citations)};
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal corpus indexes its single cell") {
    const auto c = Corpus::build({pub("P1", 2002, {{2008, 3}})}, {{"R1", "U1", "S1"}}, {{"P1", "R1"}},
                                 {{"S1", "A1"}});
    CHECK(c.index().pubs_by_cell.size() == 1);
    CHECK(c.pubs_in_cell({"U1", "S1"}) == std::vector<std::size_t>{0});
    CHECK(c.researchers_in_cell({"U1", "S1"}) == std::vector<std::size_t>{0});
    CHECK(c.pubs_in_cell({"U2", "S1"}).empty());
    CHECK(c.find_publication("P1") == 0u);
    CHECK_FALSE(c.find_researcher("nobody").has_value());
}

TEST_CASE("authorship naming an unknown publication is rejected with its id") {
    const auto msg = error_of([] {
        (void)Corpus::build({pub("P1", 2002, {{2008, 1}})}, {{"R1", "U1", "S1"}}, {{"X9", "R1"}},
                            {{"S1", "A1"}});
    });
    CHECK(msg.find("X9") != std::string::npos);
    CHECK_THROWS_AS(Corpus::build({pub("P1", 2002, {})}, {{"R1", "U1", "S1"}}, {{"X9", "R1"}}, {{"S1", "A1"}}),
                    IntegrityError);
}

TEST_CASE("other referential errors") {
    const FieldTaxonomy tax{{"S1", "A1"}};
    CHECK_THROWS_AS(Corpus::build({pub("P1", 2002, {})}, {{"R1", "U1", "S1"}}, {{"P1", "R7"}}, tax), IntegrityError);
    CHECK_THROWS_AS(Corpus::build({pub("P1", 2002, {})}, {{"R1", "U1", "S9"}}, {}, tax), IntegrityError);
    CHECK_THROWS_AS(Corpus::build({pub("P1", 2002, {}), pub("P1", 2003, {})}, {}, {}, tax), IntegrityError);
    CHECK_THROWS_AS(Corpus::build({}, {{"R1", "U1", "S1"}, {"R1", "U2", "S1"}}, {}, tax), IntegrityError);
    CHECK_THROWS_AS(Corpus::build({pub("P1", 2002, {})}, {{"R1", "U1", "S1"}}, {{"P1", "R1"}, {"P1", "R1"}}, tax),
                    IntegrityError);
}

TEST_CASE("co-authorship across universities indexes the publication in both cells") {
    const auto c = Corpus::build({pub("P1", 2002, {{2008, 2}})}, {{"R1", "U1", "S1"}, {"R2", "U2", "S1"}},
                                 {{"P1", "R1"}, {"P1", "R2"}}, {{"S1", "A1"}});
    CHECK(c.pubs_in_cell({"U1", "S1"}) == std::vector<std::size_t>{0});
    CHECK(c.pubs_in_cell({"U2", "S1"}) == std::vector<std::size_t>{0});
}

TEST_CASE("co-authors from the same cell list the publication once") {
    const auto c = Corpus::build({pub("P1", 2002, {{2008, 2}})}, {{"R1", "U1", "S1"}, {"R2", "U1", "S1"}},
                                 {{"P1", "R1"}, {"P1", "R2"}}, {{"S1", "A1"}});
    CHECK(c.pubs_in_cell({"U1", "S1"}).size() == 1);
    CHECK(c.researchers_in_cell({"U1", "S1"}).size() == 2);
}

TEST_CASE("publication record invariants") {
    CHECK_NOTHROW(validate_publication({"P", 2002, {{"A", 0.25}, {"B", 0.75}}, {{2004, 1}, {2005, 1}}}));
    CHECK_THROWS_AS(validate_publication({"P", 2002, {{"A", 0.5}, {"B", 0.3}}, {}}), IntegrityError);
    CHECK_THROWS_AS(validate_publication({"P", 2002, {}, {}}), IntegrityError);
    CHECK_THROWS_AS(validate_publication({"P", 2002, {{"A", 1.0}}, {{2004, 5}, {2005, 3}}}), IntegrityError);
    CHECK_THROWS_AS(validate_publication({"P", 2006, {{"A", 1.0}}, {{2004, 5}}}), IntegrityError);
    CHECK_THROWS_AS(validate_publication({"P", 2002, {{"A", 1.0}}, {{2004, -1}}}), IntegrityError);

    const auto w = uniform_weights({"A", "B", "C"});
    REQUIRE(w.size() == 3);
    double sum = 0;
    for (const auto& cw : w) sum += cw.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observation years and missing counts") {
    const auto c = Corpus::build({pub("P1", 2002, {{2004, 1}, {2008, 3}}), pub("P2", 2002, {{2008, 0}})}, {}, {},
                                 {{"S1", "A1"}});
    CHECK(c.observation_years() == std::vector<int>{2004, 2008});
    CHECK_NOTHROW(c.require_observation_year(2008));
    const auto msg = error_of([&] { c.require_observation_year(2004); });
    CHECK(msg.find("P2") != std::string::npos);
    CHECK_THROWS_AS(c.require_observation_year(2004), MissingInputError);
}

TEST_CASE("indexes equal a full rescan on random corpora") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        const auto g = testing::random_corpus(rng);
        const auto c = testing::build(g);
        CHECK(Corpus::rebuild_index(c.publications(), c.researchers(), c.authorships()) == c.index());
        for (const auto& [cell, list] : c.index().pubs_by_cell) {
            CHECK(std::is_sorted(list.begin(), list.end()));
            CHECK(std::adjacent_find(list.begin(), list.end()) == list.end());
        }
    }
}
