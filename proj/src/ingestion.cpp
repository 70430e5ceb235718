#include "citewin/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <utility>

#include "citewin/csv.hpp"
#include "citewin/error.hpp"

namespace citewin {

namespace {

template <class T>
T parse_number(const csv::Table& table, const csv::Row& row, const std::string& text, const char* what) {
    T value{};
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ParseError(table.file, row.line, std::string("invalid ") + what + " '" + text + "'");
    return value;
}

void require_id(const csv::Table& table, const csv::Row& row, const std::string& id, const char* what) {
    if (id.empty()) throw ParseError(table.file, row.line, std::string("empty ") + what);
}

FieldTaxonomy read_fields(const std::filesystem::path& dir) {
    const auto table = csv::read(dir / files::kFields, {"sds_id", "uda_id"});
    FieldTaxonomy taxonomy;
    for (const auto& row : table.rows) {
        require_id(table, row, row.fields[0], "sds_id");
        require_id(table, row, row.fields[1], "uda_id");
        if (!taxonomy.emplace(row.fields[0], row.fields[1]).second)
            throw ParseError(table.file, row.line, "duplicate sds_id '" + row.fields[0] + "'");
    }
    return taxonomy;
}

std::vector<ResearcherRecord> read_researchers(const std::filesystem::path& dir, const FieldTaxonomy& taxonomy) {
    const auto table = csv::read(dir / files::kResearchers, {"researcher_id", "university_id", "sds_id"});
    std::vector<ResearcherRecord> out;
    std::map<std::string, std::size_t> seen;
    for (const auto& row : table.rows) {
        ResearcherRecord r{row.fields[0], row.fields[1], row.fields[2]};
        require_id(table, row, r.id, "researcher_id");
        require_id(table, row, r.university, "university_id");
        if (!taxonomy.contains(r.sds))
            throw ParseError(table.file, row.line, "unknown sds_id '" + r.sds + "'");
        if (!seen.emplace(r.id, row.line).second)
            throw ParseError(table.file, row.line, "duplicate researcher_id '" + r.id + "'");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PublicationRecord> read_publications(const std::filesystem::path& dir) {
    const auto table = csv::read(dir / files::kPublications, {"pub_id", "pub_year", "categories"});
    std::vector<PublicationRecord> out;
    std::map<std::string, std::size_t> seen;
    for (const auto& row : table.rows) {
        PublicationRecord pub;
        pub.id = row.fields[0];
        require_id(table, row, pub.id, "pub_id");
        pub.pub_year = parse_number<int>(table, row, row.fields[1], "pub_year");
        try {
            pub.categories = parse_categories(row.fields[2]);
            validate_publication(pub);
        } catch (const Error& e) {
            throw ParseError(table.file, row.line, e.what());
        }
        if (!seen.emplace(pub.id, row.line).second)
            throw ParseError(table.file, row.line, "duplicate pub_id '" + pub.id + "'");
        out.push_back(std::move(pub));
    }
    return out;
}

void read_citations(const std::filesystem::path& dir, std::vector<PublicationRecord>& pubs) {
    const auto table = csv::read(dir / files::kCitations, {"pub_id", "obs_year", "cum_citations"});
    std::map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < pubs.size(); ++i) by_id.emplace(pubs[i].id, i);

    // pub index -> (obs_year -> line), for monotonicity diagnostics
    std::vector<std::map<int, std::size_t>> lines(pubs.size());
    for (const auto& row : table.rows) {
        auto it = by_id.find(row.fields[0]);
        if (it == by_id.end())
            throw ParseError(table.file, row.line, "unknown pub_id '" + row.fields[0] + "'");
        auto& pub = pubs[it->second];
        const int year = parse_number<int>(table, row, row.fields[1], "obs_year");
        const auto count = parse_number<std::int64_t>(table, row, row.fields[2], "cum_citations");
        if (count < 0) throw ParseError(table.file, row.line, "negative cum_citations");
        if (year < pub.pub_year)
            throw ParseError(table.file, row.line,
                             "obs_year " + std::to_string(year) + " precedes pub_year " + std::to_string(pub.pub_year));
        if (!pub.citations.emplace(year, count).second)
            throw ParseError(table.file, row.line,
                             "duplicate citation row for '" + pub.id + "' in " + std::to_string(year));
        lines[it->second].emplace(year, row.line);
    }

    for (std::size_t i = 0; i < pubs.size(); ++i) {
        std::optional<std::int64_t> previous;
        int previous_year = 0;
        for (const auto& [year, count] : pubs[i].citations) {
            if (previous && count < *previous)
                throw ParseError(table.file, lines[i].at(year),
                                 "cumulative citations of '" + pubs[i].id + "' decrease from " +
                                     std::to_string(*previous) + " (" + std::to_string(previous_year) + ") to " +
                                     std::to_string(count) + " (" + std::to_string(year) + ")");
            previous = count;
            previous_year = year;
        }
    }
}

std::vector<AuthorshipLink> read_authorship(const std::filesystem::path& dir,
                                            const std::vector<PublicationRecord>& pubs,
                                            const std::vector<ResearcherRecord>& researchers) {
    const auto table = csv::read(dir / files::kAuthorship, {"pub_id", "researcher_id"});
    std::set<std::string> pub_ids;
    for (const auto& p : pubs) pub_ids.insert(p.id);
    std::set<std::string> researcher_ids;
    for (const auto& r : researchers) researcher_ids.insert(r.id);

    std::vector<AuthorshipLink> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        AuthorshipLink link{row.fields[0], row.fields[1]};
        if (!pub_ids.contains(link.pub_id))
            throw ParseError(table.file, row.line, "unknown pub_id '" + link.pub_id + "'");
        if (!researcher_ids.contains(link.researcher_id))
            throw ParseError(table.file, row.line, "unknown researcher_id '" + link.researcher_id + "'");
        if (!seen.emplace(link.pub_id, link.researcher_id).second)
            throw ParseError(table.file, row.line,
                             "duplicate authorship (" + link.pub_id + ", " + link.researcher_id + ")");
        out.push_back(std::move(link));
    }
    return out;
}

}  // namespace

std::vector<CategoryWeight> parse_categories(const std::string& text) {
    const auto parts = csv::split(text, ';');
    std::vector<std::string> names;
    std::vector<CategoryWeight> weighted;
    for (const auto& part : parts) {
        if (part.empty()) throw IntegrityError("empty category in '" + text + "'");
        const auto colon = part.find(':');
        if (colon == std::string::npos) {
            names.push_back(part);
            continue;
        }
        CategoryWeight cw;
        cw.category = std::string(csv::trim(std::string_view(part).substr(0, colon)));
        const auto weight_text = std::string(csv::trim(std::string_view(part).substr(colon + 1)));
        std::size_t used = 0;
        try {
            cw.weight = std::stod(weight_text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (weight_text.empty() || used != weight_text.size() || !std::isfinite(cw.weight))
            throw IntegrityError("invalid category weight '" + weight_text + "'");
        weighted.push_back(std::move(cw));
    }
    if (!names.empty() && !weighted.empty())
        throw IntegrityError("categories '" + text + "' mix weighted and unweighted entries");
    return weighted.empty() ? uniform_weights(names) : weighted;
}

Corpus load_corpus(const std::filesystem::path& directory) {
    if (!std::filesystem::is_directory(directory))
        throw MissingInputError("corpus directory " + directory.string() + " does not exist");
    for (const char* name : {files::kPublications, files::kCitations, files::kAuthorship, files::kResearchers,
                             files::kFields}) {
        if (!std::filesystem::exists(directory / name))
            throw MissingInputError("missing input file " + (directory / name).string());
    }
    auto taxonomy = read_fields(directory);
    auto researchers = read_researchers(directory, taxonomy);
    auto publications = read_publications(directory);
    read_citations(directory, publications);
    auto authorships = read_authorship(directory, publications, researchers);
    return Corpus::build(std::move(publications), std::move(researchers), std::move(authorships),
                         std::move(taxonomy));
}

std::set<std::string> RepresentativityReport::retained_sds() const {
    std::set<std::string> out;
    for (const auto& row : rows)
        if (row.retained) out.insert(row.sds);
    return out;
}

bool RepresentativityReport::is_retained(const std::string& sds) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), sds,
                               [](const SdsCoverage& row, const std::string& id) { return row.sds < id; });
    return it != rows.end() && it->sds == sds && it->retained;
}

RepresentativityReport representativity_filter(const Corpus& corpus, YearRange period, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw AnalysisError("representativity threshold must lie in [0, 1]");
    if (period.empty()) throw AnalysisError("publication period is empty");

    std::map<std::string, SdsCoverage> by_sds;
    for (const auto& [sds, uda] : corpus.taxonomy()) by_sds[sds].sds = sds;

    const auto& researchers = corpus.researchers();
    const auto& pubs = corpus.publications();
    for (std::size_t r = 0; r < researchers.size(); ++r) {
        auto& row = by_sds[researchers[r].sds];
        ++row.staff;
        const auto& authored = corpus.index().pubs_by_researcher[r];
        const bool publishing = std::any_of(authored.begin(), authored.end(),
                                            [&](std::size_t p) { return period.contains(pubs[p].pub_year); });
        if (publishing) ++row.publishing_staff;
    }

    RepresentativityReport report;
    report.threshold = threshold;
    report.period = period;
    for (auto& [sds, row] : by_sds) {
        row.empty = row.staff == 0;
        if (!row.empty) {
            row.coverage = static_cast<double>(row.publishing_staff) / static_cast<double>(row.staff);
            row.retained = row.coverage >= threshold;
        }
        report.rows.push_back(row);
    }
    return report;
}

void write_representativity_csv(std::ostream& out, const RepresentativityReport& report) {
    out << "sds_id,staff,publishing_staff,coverage,retained\n";
    for (const auto& row : report.rows) {
        out << row.sds << ',' << row.staff << ',' << row.publishing_staff << ',' << csv::fixed(row.coverage, 6) << ','
            << (row.empty ? "empty" : (row.retained ? "true" : "false")) << '\n';
    }
}

}  // namespace citewin
