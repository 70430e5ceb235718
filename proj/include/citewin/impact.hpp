#pragma once

#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "citewin/corpus.hpp"

namespace citewin {

struct MedianKey {
    int pub_year = 0;
    std::string category;
    int obs_year = 0;

    auto operator<=>(const MedianKey&) const = default;
};

// Median citations of the cited publications (count >= 1) in each
// (publication year, subject category) cell, as observed at one year. Cells
// without any cited publication have no entry.
class MedianTable {
public:
    std::optional<double> median(const MedianKey& key) const;
    const std::map<MedianKey, double>& entries() const noexcept { return entries_; }
    void set(MedianKey key, double median);

private:
    std::map<MedianKey, double> entries_;
};

// Every publication counts fully (not by weight) in each of its categories.
// Throws MissingInputError naming the first publication lacking a count for
// obs_year.
MedianTable compute_median_table(const Corpus& corpus, int obs_year);

// Article Impact Index: sum over categories of weight * citations / median.
// Zero for an uncited publication. Throws AnalysisError when a cited
// publication's category has no median (table built from another corpus).
double article_impact_index(const PublicationRecord& pub, int obs_year, const MedianTable& table);

// AII of every corpus publication, indexed like corpus.publications().
std::vector<double> impact_scores(const Corpus& corpus, int obs_year, const MedianTable& table);

void write_median_table_csv(std::ostream& out, const MedianTable& table);

}  // namespace citewin
