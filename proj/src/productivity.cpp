#include "citewin/productivity.hpp"

#include <algorithm>

#include "citewin/error.hpp"

namespace citewin {

std::optional<BaselineRule> parse_baseline_rule(std::string_view text) {
    if (text == "aggregate") return BaselineRule::Aggregate;
    if (text == "mean") return BaselineRule::UnweightedMean;
    return std::nullopt;
}

std::string_view to_string(BaselineRule rule) {
    return rule == BaselineRule::Aggregate ? "aggregate" : "mean";
}

double scientific_strength(const Corpus& corpus, const CellKey& cell, YearRange period, int obs_year,
                           const MedianTable& medians) {
    double ss = 0.0;
    const auto& pubs = corpus.publications();
    for (std::size_t p : corpus.pubs_in_cell(cell)) {
        if (period.contains(pubs[p].pub_year)) ss += article_impact_index(pubs[p], obs_year, medians);
    }
    return ss;
}

double scientific_strength(const Corpus& corpus, const CellKey& cell, YearRange period,
                           std::span<const double> impact) {
    double ss = 0.0;
    const auto& pubs = corpus.publications();
    for (std::size_t p : corpus.pubs_in_cell(cell)) {
        if (period.contains(pubs[p].pub_year)) ss += impact[p];
    }
    return ss;
}

std::optional<ProductivityCell> sds_productivity(const CellKey& cell, int obs_year, double strength,
                                                 std::size_t staff) {
    if (staff == 0) return std::nullopt;
    return ProductivityCell{cell.university, cell.sds, obs_year, strength, staff,
                            strength / static_cast<double>(staff)};
}

std::optional<NationalBaseline> national_baseline(const std::string& sds, int obs_year,
                                                  std::span<const ProductivityCell> cells, BaselineRule rule) {
    double strength = 0.0;
    double productivity = 0.0;
    std::size_t staff = 0;
    std::size_t active = 0;
    for (const auto& cell : cells) {
        if (cell.staff == 0) continue;
        strength += cell.strength;
        productivity += cell.productivity;
        staff += cell.staff;
        ++active;
    }
    if (active == 0) return std::nullopt;
    const double value = rule == BaselineRule::Aggregate ? strength / static_cast<double>(staff)
                                                         : productivity / static_cast<double>(active);
    return NationalBaseline{sds, obs_year, value, active};
}

UdaProductivity uda_productivity(const std::string& university, const std::string& uda,
                                 std::span<const ProductivityCell> cells,
                                 const std::map<std::string, NationalBaseline>& baselines) {
    UdaProductivity out;
    out.university = university;
    out.uda = uda;
    for (const auto& cell : cells) out.staff += cell.staff;
    if (out.staff == 0)
        throw AnalysisError("university '" + university + "' has no staff in uda '" + uda + "'");
    if (!cells.empty()) out.obs_year = cells.front().obs_year;

    const auto total_staff = static_cast<double>(out.staff);
    for (const auto& cell : cells) {
        if (cell.staff == 0) continue;
        auto it = baselines.find(cell.sds);
        if (it == baselines.end()) throw AnalysisError("no national baseline for sds '" + cell.sds + "'");
        SdsContribution c{cell.sds, cell.productivity, it->second.value, cell.staff, 0.0, false};
        if (c.baseline > 0.0) {
            c.value = (c.productivity / c.baseline) * (static_cast<double>(c.staff) / total_staff);
        } else if (c.productivity > 0.0) {
            throw AnalysisError("sds '" + cell.sds + "' has zero baseline but positive productivity for '" +
                                university + "'");
        } else {
            c.undefined = true;
        }
        out.score += c.value;
        out.contributions.push_back(std::move(c));
    }
    return out;
}

ScopeScores ProductivityRun::sds_scores() const {
    ScopeScores out;
    for (const auto& cell : cells) out[cell.sds][cell.university] = cell.productivity;
    return out;
}

ScopeScores ProductivityRun::uda_scores() const {
    ScopeScores out;
    for (const auto& u : uda) out[u.uda][u.university] = u.score;
    return out;
}

ProductivityRun compute_productivity(const Corpus& corpus, const std::set<std::string>& retained_sds,
                                     YearRange period, int obs_year, BaselineRule rule) {
    const auto medians = compute_median_table(corpus, obs_year);
    const auto impact = impact_scores(corpus, obs_year, medians);

    ProductivityRun run;
    run.obs_year = obs_year;
    run.period = period;
    run.rule = rule;

    // researchers_by_cell is ordered by (university, sds); regroup by sds.
    std::map<std::string, std::vector<ProductivityCell>> by_sds;
    for (const auto& [key, members] : corpus.index().researchers_by_cell) {
        if (!retained_sds.contains(key.sds)) continue;
        const double ss = scientific_strength(corpus, key, period, impact);
        if (auto cell = sds_productivity(key, obs_year, ss, members.size())) by_sds[key.sds].push_back(*cell);
    }

    // uda -> university -> cells
    std::map<std::string, std::map<std::string, std::vector<ProductivityCell>>> by_uda;
    for (auto& [sds, cells] : by_sds) {
        auto baseline = national_baseline(sds, obs_year, cells, rule);
        if (!baseline) {
            run.warnings.push_back("sds '" + sds + "' has no active university; dropped");
            continue;
        }
        if (baseline->value == 0.0)
            run.warnings.push_back("sds '" + sds + "' has zero national productivity in " +
                                   std::to_string(obs_year) + "; contributions undefined");
        run.baselines.emplace(sds, *baseline);
        const auto& uda = corpus.taxonomy().at(sds);
        for (const auto& cell : cells) {
            by_uda[uda][cell.university].push_back(cell);
            run.cells.push_back(cell);
        }
    }
    for (const auto& [uda, universities] : by_uda) {
        for (const auto& [university, cells] : universities)
            run.uda.push_back(uda_productivity(university, uda, cells, run.baselines));
    }
    return run;
}

}  // namespace citewin
