#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace citewin {

// Inclusive range of calendar years.
struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
    bool empty() const noexcept { return last < first; }
};

struct CategoryWeight {
    std::string category;
    double weight = 0.0;

    bool operator==(const CategoryWeight&) const = default;
};

struct PublicationRecord {
    std::string id;
    int pub_year = 0;
    std::vector<CategoryWeight> categories;
    // Cumulative citations at December 31 of each observation year.
    std::map<int, std::int64_t> citations;

    std::optional<std::int64_t> citations_at(int obs_year) const;
};

struct ResearcherRecord {
    std::string id;
    std::string university;
    std::string sds;
};

struct AuthorshipLink {
    std::string pub_id;
    std::string researcher_id;
};

// sds_id -> uda_id
using FieldTaxonomy = std::map<std::string, std::string>;

// A university x SDS cell, the unit of productivity measurement.
struct CellKey {
    std::string university;
    std::string sds;

    auto operator<=>(const CellKey&) const = default;
};

// Weight sum tolerance for category weights.
inline constexpr double kWeightTolerance = 1e-9;

// Uniform weights 1/k over the given categories.
std::vector<CategoryWeight> uniform_weights(const std::vector<std::string>& categories);

// Throws IntegrityError naming the publication when a single-record invariant
// is violated (empty categories, weights out of (0,1] or not summing to 1,
// decreasing cumulative citations, observation year before publication).
void validate_publication(const PublicationRecord& pub);

// Derived lookup structures. Publication and researcher lists hold indexes into
// the corpus vectors, sorted ascending and free of duplicates.
struct CorpusIndex {
    std::map<CellKey, std::vector<std::size_t>> pubs_by_cell;
    std::map<CellKey, std::vector<std::size_t>> researchers_by_cell;
    std::vector<std::vector<std::size_t>> pubs_by_researcher;

    bool operator==(const CorpusIndex&) const = default;
};

// Immutable after construction; all reads are thread-safe.
class Corpus {
public:
    // Validates referential integrity and builds indexes. Throws IntegrityError
    // naming the first offending record.
    static Corpus build(std::vector<PublicationRecord> publications,
                        std::vector<ResearcherRecord> researchers,
                        std::vector<AuthorshipLink> authorships,
                        FieldTaxonomy taxonomy);

    const std::vector<PublicationRecord>& publications() const noexcept { return publications_; }
    const std::vector<ResearcherRecord>& researchers() const noexcept { return researchers_; }
    const std::vector<AuthorshipLink>& authorships() const noexcept { return authorships_; }
    const FieldTaxonomy& taxonomy() const noexcept { return taxonomy_; }
    const CorpusIndex& index() const noexcept { return index_; }

    std::optional<std::size_t> find_publication(const std::string& id) const;
    std::optional<std::size_t> find_researcher(const std::string& id) const;

    // Publications authored by at least one researcher of the cell; empty when
    // the cell is unknown.
    const std::vector<std::size_t>& pubs_in_cell(const CellKey& cell) const;
    const std::vector<std::size_t>& researchers_in_cell(const CellKey& cell) const;

    // Sorted, distinct observation years found in any citation record.
    std::vector<int> observation_years() const;

    // Throws MissingInputError naming the first publication without a count
    // for obs_year.
    void require_observation_year(int obs_year) const;

    // Recomputes the indexes from the raw collections.
    static CorpusIndex rebuild_index(const std::vector<PublicationRecord>& publications,
                                     const std::vector<ResearcherRecord>& researchers,
                                     const std::vector<AuthorshipLink>& authorships);

private:
    Corpus() = default;

    std::vector<PublicationRecord> publications_;
    std::vector<ResearcherRecord> researchers_;
    std::vector<AuthorshipLink> authorships_;
    FieldTaxonomy taxonomy_;
    std::map<std::string, std::size_t> pub_lookup_;
    std::map<std::string, std::size_t> researcher_lookup_;
    CorpusIndex index_;
};

}  // namespace citewin
