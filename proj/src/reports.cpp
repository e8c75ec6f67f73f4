#include "zpa/reports.hpp"

namespace zpa {

using nlohmann::json;

json to_json(const TransitivityReport& report) {
    json levels = json::array();
    for (const auto& lv : report.levels) {
        const char* status = lv.status == TransitivityReport::Status::Transitive ? "transitive"
                           : lv.status == TransitivityReport::Status::NotTransitive ? "not-transitive"
                                                                                    : "skipped";
        json entry{{"n", lv.n}, {"status", status}};
        if (lv.status == TransitivityReport::Status::NotTransitive)
            entry["cycles"] = lv.cycles;
        levels.push_back(std::move(entry));
    }
    return json{{"levels", std::move(levels)},
                {"all_transitive", report.all_transitive},
                {"first_failure", report.first_failure ? json(*report.first_failure) : json()}};
}

json to_json(const WitnessResult& witness) {
    json j{{"w", witness.input.to_string()}, {"w_prime", witness.wanted.to_string()}};
    if (witness.prefix) {
        j["witness"] = witness.prefix->to_string();
        j["witness_length"] = witness.prefix->length();
    } else {
        j["exhausted_up_to"] = witness.exhausted_up_to;
    }
    return j;
}

json to_json(const CompleteCheck& check) {
    const char* verdict = check.verdict == CompleteCheck::Verdict::WitnessedAllPairs ? "witnessed-all-pairs"
                        : check.verdict == CompleteCheck::Verdict::Refuted ? "refuted"
                                                                           : "inconclusive";
    json pairs = json::array();
    for (const auto& w : check.table) pairs.push_back(to_json(w));
    json missing = json::array();
    for (const auto& [a, b] : check.missing)
        missing.push_back(a.to_string() + "->" + b.to_string());
    return json{{"n", check.n}, {"verdict", verdict},
                {"pairs", std::move(pairs)}, {"missing", std::move(missing)}};
}

json to_json(const AbsoluteCheck& check) {
    const char* verdict = check.verdict == AbsoluteCheck::Verdict::Witnessed ? "witnessed"
                                                                             : "inconclusive";
    json entries = json::array();
    for (const auto& entry : check.table) {
        json j = to_json(entry.search);
        j["start"] = entry.start.to_string();
        entries.push_back(std::move(j));
    }
    return json{{"n", check.n}, {"xlen", check.xlen}, {"verdict", verdict},
                {"entries", std::move(entries)}, {"missing", check.missing}};
}

json to_json(const SufficiencyCertificate& cert) {
    const char* cls = cert.cls == SufficiencyCertificate::Class::PolyDegreeGe2 ? "poly-degree-ge-2"
                    : cert.cls == SufficiencyCertificate::Class::CxPlusCx ? "cx-plus-cx"
                    : cert.cls == SufficiencyCertificate::Class::PolyPlusOrC ? "poly-plus-or-c"
                                                                             : "unsupported";
    json j{{"class", cls}, {"checked", cert.checked}};
    if (cert.cls != SufficiencyCertificate::Class::Unsupported) {
        j["witness_point"] = cert.witness_point.get_str();
        j["second_derivative"] = {
            {"valuation", cert.valuation},
            {"unit_residue", cert.unit_residue.get_str()},
            {"residue_precision", cert.residue_precision},
        };
        if (cert.exact_second) j["second_derivative"]["exact"] = cert.exact_second->get_str();
        j["nonneg_exact"] = cert.nonneg_exact;
        j["sign_flipped"] = cert.sign_flipped;
    }
    return j;
}

namespace {

json trend_entries(const std::vector<TrendEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries)
        arr.push_back(json{{"k", e.k}, {"m", e.m}, {"occupied", e.occupied},
                           {"alpha_hat", e.alpha_hat}});
    return arr;
}

} // namespace

json to_json(const TrendSeries& series) {
    return json{{"fixed_m", trend_entries(series.fixed_m)},
                {"refinement", trend_entries(series.refinement)}};
}

json to_json(const Classification& c) {
    const char* verdict = c.verdict == Classification::Verdict::Measure1Candidate ? "measure-1-candidate"
                        : c.verdict == Classification::Verdict::Measure0Candidate ? "measure-0-candidate"
                                                                                  : "undetermined";
    json j = to_json(c.series);
    j["verdict"] = verdict;
    j["heuristic"] = true; // finite-sample classifier, not a proof
    return j;
}

json to_json(const MirrorReport& report) {
    return json{{"k", report.k}, {"mismatches", report.mismatches},
                {"boundary_exceptions", report.boundary_exceptions}};
}

json grid_stats(const PlotGrid& grid) {
    return json{{"k", grid.k}, {"m", grid.m}, {"occupied", grid.occupied},
                {"total_cells", grid.side * grid.side},
                {"alpha_hat", grid.alpha_hat()}};
}

} // namespace zpa
