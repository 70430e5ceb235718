#include "citewin/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "citewin/error.hpp"
#include "citewin/ingestion.hpp"

namespace citewin {

namespace {

using nlohmann::json;

std::string padded(char prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

std::size_t digits_for(std::size_t n) { return std::to_string(std::max<std::size_t>(n, 1)).size(); }

std::string category_of(const std::string& sds) { return "WC_" + sds; }

bool valid_id(const std::string& id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '-';
    });
}

template <class Rng>
std::int64_t poisson(Rng& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(rng);
}

}  // namespace

void SynthConfig::validate() const {
    if (n_universities == 0) throw ConfigError("synthetic config needs at least one university");
    if (sds.empty()) throw ConfigError("synthetic config needs at least one sds");
    if (staff_min == 0 || staff_max < staff_min) throw ConfigError("staff_range must satisfy 1 <= min <= max");
    if (!(active_probability > 0.0 && active_probability <= 1.0))
        throw ConfigError("active_probability must lie in (0, 1]");
    if (pub_period.empty()) throw ConfigError("pub_period is empty");
    if (obs_years.empty()) throw ConfigError("obs_years is empty");
    for (int y : obs_years)
        if (y < pub_period.last) throw ConfigError("observation year " + std::to_string(y) + " precedes pub_period end");
    for (double v : {pub_rate, citation_scale, university_sigma, researcher_sigma, paper_sigma})
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("rates and spreads must be finite and >= 0");
    if (!std::isfinite(researcher_mu)) throw ConfigError("researcher_mu must be finite");
    for (double p : {coauthor_probability, cross_category_probability})
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probabilities must lie in [0, 1]");
    for (const auto& [name, profile] : profiles) {
        if (profile.empty()) throw ConfigError("accrual profile '" + name + "' is empty");
        for (double m : profile)
            if (!(m >= 0.0) || !std::isfinite(m))
                throw ConfigError("accrual profile '" + name + "' has a negative or non-finite multiplier");
    }
    std::set<std::string> seen;
    for (const auto& s : sds) {
        if (!valid_id(s.id) || !valid_id(s.uda)) throw ConfigError("invalid sds or uda id '" + s.id + "'");
        if (!seen.insert(s.id).second) throw ConfigError("duplicate sds id '" + s.id + "'");
        if (!profiles.contains(s.profile))
            throw ConfigError("sds '" + s.id + "' references unknown profile '" + s.profile + "'");
    }
}

SynthConfig SynthConfig::from_json(const json& j) {
    SynthConfig c;
    try {
        c.n_universities = j.value("n_universities", c.n_universities);
        if (j.contains("staff_range")) {
            const auto r = j.at("staff_range").get<std::vector<std::size_t>>();
            if (r.size() != 2) throw ConfigError("staff_range must have two entries");
            c.staff_min = r[0];
            c.staff_max = r[1];
        }
        c.active_probability = j.value("active_probability", c.active_probability);
        if (j.contains("pub_period")) {
            const auto r = j.at("pub_period").get<std::vector<int>>();
            if (r.size() != 2) throw ConfigError("pub_period must have two entries");
            c.pub_period = {r[0], r[1]};
        }
        c.obs_years = j.value("obs_years", c.obs_years);
        c.pub_rate = j.value("pub_rate", c.pub_rate);
        c.citation_scale = j.value("citation_scale", c.citation_scale);
        c.profiles = j.value("profiles", c.profiles);
        if (j.contains("quality")) {
            const auto& q = j.at("quality");
            c.university_sigma = q.value("university_sigma", c.university_sigma);
            c.researcher_mu = q.value("researcher_mu", c.researcher_mu);
            c.researcher_sigma = q.value("researcher_sigma", c.researcher_sigma);
            c.paper_sigma = q.value("paper_sigma", c.paper_sigma);
        }
        c.coauthor_probability = j.value("coauthor_probability", c.coauthor_probability);
        c.cross_category_probability = j.value("cross_category_probability", c.cross_category_probability);
        c.seed = j.value("seed", c.seed);
        for (const auto& uda : j.value("udas", json::array())) {
            const auto uda_id = uda.at("id").get<std::string>();
            for (const auto& s : uda.at("sds"))
                c.sds.push_back({s.at("id").get<std::string>(), uda_id, s.at("profile").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid synthetic config: ") + e.what());
    }
    c.validate();
    return c;
}

json SynthConfig::to_json() const {
    json udas = json::array();
    for (const auto& s : sds) {
        auto it = std::find_if(udas.begin(), udas.end(), [&](const json& u) { return u["id"] == s.uda; });
        if (it == udas.end()) {
            udas.push_back({{"id", s.uda}, {"sds", json::array()}});
            it = udas.end() - 1;
        }
        (*it)["sds"].push_back({{"id", s.id}, {"profile", s.profile}});
    }
    return {
        {"n_universities", n_universities},
        {"staff_range", {staff_min, staff_max}},
        {"active_probability", active_probability},
        {"udas", udas},
        {"pub_period", {pub_period.first, pub_period.last}},
        {"obs_years", obs_years},
        {"pub_rate", pub_rate},
        {"citation_scale", citation_scale},
        {"profiles", profiles},
        {"quality",
         {{"university_sigma", university_sigma},
          {"researcher_mu", researcher_mu},
          {"researcher_sigma", researcher_sigma},
          {"paper_sigma", paper_sigma}}},
        {"coauthor_probability", coauthor_probability},
        {"cross_category_probability", cross_category_probability},
        {"seed", seed},
    };
}

SynthConfig load_synth_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw MissingInputError("cannot open synthetic config " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + file.string() + ": " + e.what());
    }
    return SynthConfig::from_json(j);
}

SynthConfig default_synth_config() {
    SynthConfig c;
    c.n_universities = 40;
    c.staff_min = 2;
    c.staff_max = 8;
    c.active_probability = 0.9;
    c.profiles = {{"fast", {1.0, 0.5, 0.2, 0.1, 0.05}}, {"slow", {0.1, 0.3, 0.6, 0.8, 1.0}}};
    c.sds = {
        {"MAT/02", "MATH", "slow"}, {"MAT/03", "MATH", "slow"}, {"MAT/05", "MATH", "slow"},
        {"CHIM/01", "CHEM", "fast"}, {"CHIM/02", "CHEM", "fast"}, {"CHIM/03", "CHEM", "fast"},
    };
    c.pub_rate = 1.0;
    c.citation_scale = 0.3;
    return c;
}

GeneratedCorpus generate_records(const SynthConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    GeneratedCorpus out;
    for (const auto& s : config.sds) out.taxonomy[s.id] = s.uda;

    const std::size_t uni_width = digits_for(config.n_universities);
    std::vector<double> university_effect(config.n_universities);
    for (auto& e : university_effect) e = std::normal_distribution<double>(0.0, config.university_sigma)(rng);

    // Roster: per sds, researchers of each university.
    std::vector<double> quality;
    std::vector<std::size_t> researcher_sds;
    std::vector<std::size_t> researcher_uni;
    for (std::size_t s = 0; s < config.sds.size(); ++s) {
        for (std::size_t u = 0; u < config.n_universities; ++u) {
            if (!std::bernoulli_distribution(config.active_probability)(rng)) continue;
            const auto staff = std::uniform_int_distribution<std::size_t>(config.staff_min, config.staff_max)(rng);
            for (std::size_t k = 0; k < staff; ++k) {
                const double effect = std::normal_distribution<double>(config.researcher_mu, config.researcher_sigma)(rng);
                quality.push_back(std::exp(university_effect[u] + effect));
                researcher_sds.push_back(s);
                researcher_uni.push_back(u);
            }
        }
    }
    const std::size_t n_researchers = quality.size();
    const std::size_t researcher_width = std::max<std::size_t>(5, digits_for(n_researchers));
    for (std::size_t r = 0; r < n_researchers; ++r) {
        out.researchers.push_back({padded('R', r + 1, researcher_width),
                                   padded('U', researcher_uni[r] + 1, uni_width), config.sds[researcher_sds[r]].id});
    }

    std::vector<std::vector<std::size_t>> by_sds(config.sds.size());
    for (std::size_t r = 0; r < n_researchers; ++r) by_sds[researcher_sds[r]].push_back(r);

    const int last_obs = *std::max_element(config.obs_years.begin(), config.obs_years.end());
    std::size_t pub_counter = 0;
    for (std::size_t r = 0; r < n_researchers; ++r) {
        const std::size_t s = researcher_sds[r];
        const auto& profile = config.profiles.at(config.sds[s].profile);
        for (int year = config.pub_period.first; year <= config.pub_period.last; ++year) {
            const auto n_pubs = poisson(rng, config.pub_rate * quality[r]);
            for (std::int64_t i = 0; i < n_pubs; ++i) {
                PublicationRecord pub;
                pub.id = padded('P', ++pub_counter, 6);
                pub.pub_year = year;
                pub.categories = {{category_of(config.sds[s].id), 1.0}};
                if (config.sds.size() > 1 && std::bernoulli_distribution(config.cross_category_probability)(rng)) {
                    auto other = std::uniform_int_distribution<std::size_t>(0, config.sds.size() - 2)(rng);
                    if (other >= s) ++other;
                    pub.categories = {{category_of(config.sds[s].id), 0.5}, {category_of(config.sds[other].id), 0.5}};
                }

                out.authorships.push_back({pub.id, out.researchers[r].id});
                if (std::bernoulli_distribution(config.coauthor_probability)(rng)) {
                    std::vector<std::size_t> candidates;
                    for (std::size_t c : by_sds[s])
                        if (researcher_uni[c] != researcher_uni[r]) candidates.push_back(c);
                    if (!candidates.empty()) {
                        const auto pick =
                            candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
                        out.authorships.push_back({pub.id, out.researchers[pick].id});
                    }
                }

                double mean = config.citation_scale * quality[r];
                if (config.paper_sigma > 0.0)
                    mean *= std::exp(std::normal_distribution<double>(0.0, config.paper_sigma)(rng));
                std::int64_t cumulative = 0;
                for (int y = year; y <= last_obs; ++y) {
                    const auto age = static_cast<std::size_t>(y - year);
                    cumulative += poisson(rng, mean * profile[std::min(age, profile.size() - 1)]);
                    if (std::find(config.obs_years.begin(), config.obs_years.end(), y) != config.obs_years.end())
                        pub.citations[y] = cumulative;
                }
                out.publications.push_back(std::move(pub));
            }
        }
    }
    return out;
}

void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    auto open = [&](const char* name) {
        std::ofstream f(directory / name, std::ios::binary);
        if (!f) throw MissingInputError("cannot write " + (directory / name).string());
        return f;
    };
    {
        auto f = open(files::kFields);
        f << "sds_id,uda_id\n";
        for (const auto& [sds, uda] : corpus.taxonomy) f << sds << ',' << uda << '\n';
    }
    {
        auto f = open(files::kResearchers);
        f << "researcher_id,university_id,sds_id\n";
        for (const auto& r : corpus.researchers) f << r.id << ',' << r.university << ',' << r.sds << '\n';
    }
    {
        auto f = open(files::kPublications);
        f << "pub_id,pub_year,categories\n";
        for (const auto& p : corpus.publications) {
            f << p.id << ',' << p.pub_year << ',';
            for (std::size_t i = 0; i < p.categories.size(); ++i) {
                if (i) f << ';';
                f << p.categories[i].category;
                if (p.categories.size() > 1) f << ':' << p.categories[i].weight;
            }
            f << '\n';
        }
    }
    {
        auto f = open(files::kCitations);
        f << "pub_id,obs_year,cum_citations\n";
        for (const auto& p : corpus.publications)
            for (const auto& [year, count] : p.citations) f << p.id << ',' << year << ',' << count << '\n';
    }
    {
        auto f = open(files::kAuthorship);
        f << "pub_id,researcher_id\n";
        for (const auto& a : corpus.authorships) f << a.pub_id << ',' << a.researcher_id << '\n';
    }
}

void generate(const SynthConfig& config, const std::filesystem::path& directory) {
    write_corpus(generate_records(config), directory);
}

}  // namespace citewin
