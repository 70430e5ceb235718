#include "citewin/impact.hpp"

#include <string>

#include "citewin/csv.hpp"
#include "citewin/error.hpp"
#include "citewin/stats.hpp"

namespace citewin {

std::optional<double> MedianTable::median(const MedianKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void MedianTable::set(MedianKey key, double median) { entries_[std::move(key)] = median; }

MedianTable compute_median_table(const Corpus& corpus, int obs_year) {
    std::map<MedianKey, std::vector<double>> cited;
    for (const auto& pub : corpus.publications()) {
        const auto count = pub.citations_at(obs_year);
        if (!count)
            throw MissingInputError("publication '" + pub.id + "' has no citation count for " +
                                    std::to_string(obs_year));
        if (*count < 1) continue;
        for (const auto& cw : pub.categories)
            cited[{pub.pub_year, cw.category, obs_year}].push_back(static_cast<double>(*count));
    }
    MedianTable table;
    for (auto& [key, counts] : cited) table.set(key, stats::median(std::move(counts)));
    return table;
}

double article_impact_index(const PublicationRecord& pub, int obs_year, const MedianTable& table) {
    const auto count = pub.citations_at(obs_year);
    if (!count)
        throw MissingInputError("publication '" + pub.id + "' has no citation count for " + std::to_string(obs_year));
    if (*count == 0) return 0.0;

    const auto c = static_cast<double>(*count);
    double aii = 0.0;
    for (const auto& cw : pub.categories) {
        const auto me = table.median({pub.pub_year, cw.category, obs_year});
        if (!me || *me <= 0.0)
            throw AnalysisError("no citation median for publication '" + pub.id + "' in category '" + cw.category +
                                "' (" + std::to_string(pub.pub_year) + ", observed " + std::to_string(obs_year) +
                                ")");
        aii += cw.weight * (c / *me);
    }
    return aii;
}

std::vector<double> impact_scores(const Corpus& corpus, int obs_year, const MedianTable& table) {
    std::vector<double> out;
    out.reserve(corpus.publications().size());
    for (const auto& pub : corpus.publications()) out.push_back(article_impact_index(pub, obs_year, table));
    return out;
}

void write_median_table_csv(std::ostream& out, const MedianTable& table) {
    out << "pub_year,category_id,obs_year,median\n";
    for (const auto& [key, median] : table.entries())
        out << key.pub_year << ',' << key.category << ',' << key.obs_year << ',' << csv::fixed(median, 6) << '\n';
}

}  // namespace citewin
