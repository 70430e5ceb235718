#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "citewin/corpus.hpp"

namespace citewin {

struct SynthSds {
    std::string id;
    std::string uda;
    std::string profile;  // key into SynthConfig::profiles
};

// Parameters of the synthetic corpus generator. Publication counts are Poisson
// per researcher-year with mean pub_rate * quality; yearly citation increments
// are Poisson with mean citation_scale * quality * profile[age], where age is
// years since publication (ages past the profile reuse its last entry).
struct SynthConfig {
    std::size_t n_universities = 20;
    std::size_t staff_min = 2;
    std::size_t staff_max = 10;
    double active_probability = 1.0;  // chance a university staffs a given SDS
    std::vector<SynthSds> sds;
    YearRange pub_period{2001, 2003};
    std::vector<int> obs_years{2004, 2005, 2006, 2007, 2008};
    double pub_rate = 1.0;
    double citation_scale = 1.0;
    std::map<std::string, std::vector<double>> profiles;
    // Quality = exp(university effect + researcher effect); both normal.
    double university_sigma = 0.3;
    double researcher_mu = 0.0;
    double researcher_sigma = 0.5;
    double paper_sigma = 0.5;  // lognormal noise on each publication's citation mean
    double coauthor_probability = 0.1;
    double cross_category_probability = 0.1;
    std::uint64_t seed = 1;

    // Throws ConfigError on infeasible or inconsistent settings.
    void validate() const;

    static SynthConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

SynthConfig load_synth_config(const std::filesystem::path& file);

// A small two-discipline configuration with one fast- and one slow-maturing
// citation profile.
SynthConfig default_synth_config();

struct GeneratedCorpus {
    std::vector<PublicationRecord> publications;
    std::vector<ResearcherRecord> researchers;
    std::vector<AuthorshipLink> authorships;
    FieldTaxonomy taxonomy;
};

// Deterministic in the config (including its seed).
GeneratedCorpus generate_records(const SynthConfig& config);

// Writes the five corpus CSV files into `directory`, creating it if needed.
void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& directory);

void generate(const SynthConfig& config, const std::filesystem::path& directory);

}  // namespace citewin
