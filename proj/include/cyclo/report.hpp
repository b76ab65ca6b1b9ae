#pragma once

// JSON / CSV / text emission for the CLI. JSON records are versioned with a
// top-level "schema" field and always carry p, u, precision, and seed so any
// run can be reproduced byte-for-byte.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cyclo/bernoulli.hpp"
#include "cyclo/eigen_set.hpp"
#include "cyclo/singular.hpp"
#include "cyclo/units.hpp"
#include "cyclo/verify.hpp"

namespace cyclo::report {

using ordered_json = nlohmann::ordered_json;

inline ordered_json envelope(const char* command, u32 precision, u64 seed) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["precision"] = precision;
    j["seed"] = seed;
    return j;
}

inline ordered_json to_json(const IrregularityReport& r) {
    ordered_json j;
    j["p"] = r.p;
    j["u"] = r.u;
    j["i_p"] = r.i_p;
    j["irregular_indices"] = r.irregular;
    j["minus_eigenvalues"] = r.minus_eigenvalues;
    return j;
}

inline ordered_json to_json(const RankProfile& r) {
    ordered_json j;
    j["d"] = r.d;
    j["g"] = r.g;
    j["r1"] = r.r1;
    j["rd"] = r.rd;
    j["rg"] = r.rg;
    j["sandwich_d"] = r.sandwich_d;
    j["sandwich_g"] = r.sandwich_g;
    j["product"] = r.product;
    j["collapse"] = r.collapse;
    j["pass"] = r.all();
    return j;
}

inline ordered_json to_json(const BoundsReport& b) {
    ordered_json j;
    j["gap_le_ip"] = b.gap_le_ip;
    j["ip_eq_r1minus"] = b.ip_eq_r1minus;
    j["r1minus_le_rpminus"] = b.r1minus_le_rpminus;
    j["gap_le_rho1"] = b.gap_le_rho1;
    j["rho1_le_rpminus"] = b.rho1_le_rpminus;
    j["pass"] = b.all();
    return j;
}

inline ordered_json to_json(const UnitEigencomponent& c) {
    ordered_json j;
    j["two_n"] = 2 * c.n;
    j["mu"] = c.mu;
    if (c.v) j["v"] = *c.v;
    else j["v"] = nullptr;
    if (c.a_level) j["a_level"] = *c.a_level;
    else j["a_level"] = nullptr;
    j["primary"] = c.primary;
    j["locally_trivial"] = c.locally_trivial;
    j["residue_ok"] = c.residue_ok;
    return j;
}

inline ordered_json to_json(const SurveyReport& r) {
    ordered_json j;
    j["p"] = r.p;
    j["u"] = r.u;
    j["precision"] = r.precision;
    j["i_p"] = r.i_p;
    j["irregular_indices"] = r.irregular;
    j["primary_index_set"] = r.primary_index_set;
    j["rho1"] = r.rho1_local;
    j["bounds"] = to_json(r.bounds);
    ordered_json comps = ordered_json::array();
    for (const auto& c : r.components) comps.push_back(to_json(c));
    j["components"] = comps;
    j["anomalies"] = r.anomalies;
    j["ok"] = r.ok;
    return j;
}

inline ordered_json to_json(const verify::SuiteResult& s) {
    ordered_json j;
    j["suite"] = s.suite;
    j["checks"] = s.checks;
    j["failures"] = s.failures;
    j["pass"] = s.passed();
    if (!s.first_counterexample.empty()) j["counterexample"] = s.first_counterexample;
    return j;
}

inline std::string join(const std::vector<u64>& v, const char* sep = ";") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

/// Valuation rendering used by the text format: `v=k exact` for measured
/// valuations, `v>=cap` for sentinel hits.
inline std::string valuation_text(const std::optional<u64>& v, u64 cap) {
    if (v) return "v=" + std::to_string(*v) + " exact";
    return "v>=" + std::to_string(cap);
}

}  // namespace cyclo::report
