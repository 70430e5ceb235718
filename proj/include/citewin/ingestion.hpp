#pragma once

#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "citewin/corpus.hpp"

namespace citewin {

// File names of an on-disk corpus directory.
namespace files {
inline constexpr const char* kPublications = "publications.csv";
inline constexpr const char* kCitations = "citations.csv";
inline constexpr const char* kAuthorship = "authorship.csv";
inline constexpr const char* kResearchers = "researchers.csv";
inline constexpr const char* kFields = "fields.csv";
}  // namespace files

// Loads the five-file corpus directory. Row-level problems raise ParseError
// with file and line; a missing directory or file raises MissingInputError.
Corpus load_corpus(const std::filesystem::path& directory);

// Parses the categories column: "A;B" (uniform weights) or "A:0.25;B:0.75".
std::vector<CategoryWeight> parse_categories(const std::string& text);

struct SdsCoverage {
    std::string sds;
    std::size_t staff = 0;
    std::size_t publishing_staff = 0;
    double coverage = 0.0;
    bool retained = false;
    bool empty = false;  // no researchers at all
};

struct RepresentativityReport {
    double threshold = 0.0;
    YearRange period;
    std::vector<SdsCoverage> rows;  // one per taxonomy SDS, sorted by id

    std::set<std::string> retained_sds() const;
    bool is_retained(const std::string& sds) const;
};

// An SDS is retained when the share of its researchers (nationally) with at
// least one publication dated inside `period` reaches `threshold`.
// Threshold must lie in [0, 1]; SDSs without researchers are never retained.
RepresentativityReport representativity_filter(const Corpus& corpus, YearRange period, double threshold);

void write_representativity_csv(std::ostream& out, const RepresentativityReport& report);

}  // namespace citewin
