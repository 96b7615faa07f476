#pragma once

#include <json.hpp>

#include "tcft/suites.hpp"

namespace tcft {

// Machine-readable report: schema tcft-verify-report/1. Key order and float
// formatting are deterministic, so identical configs and seeds give identical
// bytes.
inline nlohmann::ordered_json report_json(const RunConfig& cfg,
                                          const std::vector<SuiteResult>& results) {
    nlohmann::ordered_json j;
    j["schema"] = "tcft-verify-report/1";
    nlohmann::ordered_json jc;
    jc["truncation_weight"] = cfg.truncation_weight;
    jc["zero_mode_cap"] = cfg.zero_mode_cap;
    jc["kappa"] = cfg.kappa;
    jc["seed"] = cfg.seed;
    jc["mc_samples"] = cfg.mc_samples;
    jc["mc_samples_heavy"] = cfg.mc_samples_heavy;
    jc["rel_tol"] = cfg.rel_tol;
    jc["identity_rel_floor"] = cfg.identity_rel_floor;
    jc["circlep_sign"] = cfg.circlep_sign;
    jc["d_convention"] = cfg.twist == DTwist::Twisted ? "derivative" : "plain";
    jc["eps"] = cfg.eps;
    jc["suite"] = cfg.suites;
    jc["spectators"] = int(cfg.spectators.size());
    j["config"] = std::move(jc);
    nlohmann::ordered_json suites = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json js;
        js["id"] = r.id;
        js["status"] = r.status;
        js["residual"] = r.residual;
        js["sigma"] = r.sigma;
        js["baseline"] = r.baseline;
        nlohmann::ordered_json det = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.details) det[k] = v;
        js["details"] = std::move(det);
        if (!r.terms.empty()) {
            nlohmann::ordered_json terms = nlohmann::ordered_json::object();
            for (const auto& t : r.terms) {
                nlohmann::ordered_json tv = nlohmann::ordered_json::array();
                for (int c = 0; c < 4; ++c) {
                    nlohmann::ordered_json comp;
                    comp["re"] = t.vals[c].value.real();
                    comp["im"] = t.vals[c].value.imag();
                    comp["sigma"] = t.vals[c].sigma;
                    tv.push_back(std::move(comp));
                }
                terms[t.label] = std::move(tv);
            }
            js["terms"] = std::move(terms);
        }
        suites.push_back(std::move(js));
    }
    j["suites"] = std::move(suites);
    return j;
}

inline std::string report_summary(const std::vector<SuiteResult>& results) {
    std::ostringstream os;
    os.precision(6);
    for (const auto& r : results) {
        os << (r.status == "pass" ? "PASS " : r.status == "exploratory" ? "INFO " : "FAIL ");
        os << r.id;
        os << "  residual=" << r.residual << " sigma=" << r.sigma << " baseline=" << r.baseline;
        if (r.status != "pass" && r.status != "fail") os << " [" << r.status << "]";
        os << "\n";
    }
    return os.str();
}

} // namespace tcft
