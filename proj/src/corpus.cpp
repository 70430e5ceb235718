#include "citewin/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "citewin/error.hpp"

namespace citewin {

std::optional<std::int64_t> PublicationRecord::citations_at(int obs_year) const {
    auto it = citations.find(obs_year);
    if (it == citations.end()) return std::nullopt;
    return it->second;
}

std::vector<CategoryWeight> uniform_weights(const std::vector<std::string>& categories) {
    std::vector<CategoryWeight> out;
    out.reserve(categories.size());
    const double w = categories.empty() ? 0.0 : 1.0 / static_cast<double>(categories.size());
    for (const auto& c : categories) out.push_back({c, w});
    return out;
}

void validate_publication(const PublicationRecord& pub) {
    const std::string who = "publication '" + pub.id + "'";
    if (pub.id.empty()) throw IntegrityError("publication with empty id");
    if (pub.categories.empty()) throw IntegrityError(who + " has no subject categories");

    double sum = 0.0;
    std::set<std::string> seen;
    for (const auto& cw : pub.categories) {
        if (cw.category.empty()) throw IntegrityError(who + " has an empty category id");
        if (!seen.insert(cw.category).second)
            throw IntegrityError(who + " lists category '" + cw.category + "' twice");
        if (!(cw.weight > 0.0 && cw.weight <= 1.0))
            throw IntegrityError(who + " has weight outside (0,1] for category '" + cw.category + "'");
        sum += cw.weight;
    }
    if (std::abs(sum - 1.0) > kWeightTolerance)
        throw IntegrityError(who + " has category weights summing to " + std::to_string(sum));

    std::optional<std::int64_t> previous;
    for (const auto& [year, count] : pub.citations) {
        if (year < pub.pub_year)
            throw IntegrityError(who + " has observation year " + std::to_string(year) +
                                 " before publication year " + std::to_string(pub.pub_year));
        if (count < 0)
            throw IntegrityError(who + " has negative citation count in " + std::to_string(year));
        if (previous && count < *previous)
            throw IntegrityError(who + " has decreasing cumulative citations at " + std::to_string(year));
        previous = count;
    }
}

namespace {

template <class Record>
std::map<std::string, std::size_t> lookup_by_id(const std::vector<Record>& records, const char* kind) {
    std::map<std::string, std::size_t> lookup;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!lookup.emplace(records[i].id, i).second)
            throw IntegrityError(std::string("duplicate ") + kind + " id '" + records[i].id + "'");
    }
    return lookup;
}

void sort_unique(std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

const std::vector<std::size_t> kEmpty;

}  // namespace

CorpusIndex Corpus::rebuild_index(const std::vector<PublicationRecord>& publications,
                                  const std::vector<ResearcherRecord>& researchers,
                                  const std::vector<AuthorshipLink>& authorships) {
    std::map<std::string, std::size_t> pubs;
    for (std::size_t i = 0; i < publications.size(); ++i) pubs.emplace(publications[i].id, i);
    std::map<std::string, std::size_t> people;
    for (std::size_t i = 0; i < researchers.size(); ++i) people.emplace(researchers[i].id, i);

    CorpusIndex index;
    index.pubs_by_researcher.resize(researchers.size());
    for (std::size_t r = 0; r < researchers.size(); ++r) {
        index.researchers_by_cell[{researchers[r].university, researchers[r].sds}].push_back(r);
    }
    for (const auto& link : authorships) {
        const std::size_t p = pubs.at(link.pub_id);
        const std::size_t r = people.at(link.researcher_id);
        index.pubs_by_researcher[r].push_back(p);
        // A publication counts once per cell however many of the cell's
        // researchers co-authored it.
        index.pubs_by_cell[{researchers[r].university, researchers[r].sds}].push_back(p);
    }
    for (auto& [cell, list] : index.pubs_by_cell) sort_unique(list);
    for (auto& [cell, list] : index.researchers_by_cell) sort_unique(list);
    for (auto& list : index.pubs_by_researcher) sort_unique(list);
    return index;
}

Corpus Corpus::build(std::vector<PublicationRecord> publications,
                     std::vector<ResearcherRecord> researchers,
                     std::vector<AuthorshipLink> authorships,
                     FieldTaxonomy taxonomy) {
    Corpus corpus;
    corpus.pub_lookup_ = lookup_by_id(publications, "publication");
    corpus.researcher_lookup_ = lookup_by_id(researchers, "researcher");

    for (const auto& pub : publications) validate_publication(pub);

    for (const auto& [sds, uda] : taxonomy) {
        if (sds.empty() || uda.empty()) throw IntegrityError("field taxonomy has an empty sds or uda id");
    }
    for (const auto& r : researchers) {
        if (r.university.empty()) throw IntegrityError("researcher '" + r.id + "' has no university");
        if (!taxonomy.contains(r.sds))
            throw IntegrityError("researcher '" + r.id + "' references unknown sds '" + r.sds + "'");
    }

    std::set<std::pair<std::string, std::string>> seen_links;
    for (const auto& link : authorships) {
        if (!corpus.pub_lookup_.contains(link.pub_id))
            throw IntegrityError("authorship references unknown publication '" + link.pub_id + "'");
        if (!corpus.researcher_lookup_.contains(link.researcher_id))
            throw IntegrityError("authorship references unknown researcher '" + link.researcher_id + "'");
        if (!seen_links.emplace(link.pub_id, link.researcher_id).second)
            throw IntegrityError("duplicate authorship (" + link.pub_id + ", " + link.researcher_id + ")");
    }

    corpus.index_ = rebuild_index(publications, researchers, authorships);
    corpus.publications_ = std::move(publications);
    corpus.researchers_ = std::move(researchers);
    corpus.authorships_ = std::move(authorships);
    corpus.taxonomy_ = std::move(taxonomy);
    return corpus;
}

std::optional<std::size_t> Corpus::find_publication(const std::string& id) const {
    auto it = pub_lookup_.find(id);
    if (it == pub_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Corpus::find_researcher(const std::string& id) const {
    auto it = researcher_lookup_.find(id);
    if (it == researcher_lookup_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& Corpus::pubs_in_cell(const CellKey& cell) const {
    auto it = index_.pubs_by_cell.find(cell);
    return it == index_.pubs_by_cell.end() ? kEmpty : it->second;
}

const std::vector<std::size_t>& Corpus::researchers_in_cell(const CellKey& cell) const {
    auto it = index_.researchers_by_cell.find(cell);
    return it == index_.researchers_by_cell.end() ? kEmpty : it->second;
}

std::vector<int> Corpus::observation_years() const {
    std::set<int> years;
    for (const auto& pub : publications_)
        for (const auto& [year, count] : pub.citations) years.insert(year);
    return {years.begin(), years.end()};
}

void Corpus::require_observation_year(int obs_year) const {
    for (const auto& pub : publications_) {
        if (!pub.citations.contains(obs_year))
            throw MissingInputError("publication '" + pub.id + "' has no citation count for " +
                                    std::to_string(obs_year));
    }
}

}  // namespace citewin
