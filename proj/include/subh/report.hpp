#pragma once

// Report serialization for the verification suite. report.json is
// deterministic for a fixed config and seed; wall-clock data goes into a
// separate sidecar so byte-identical reruns are possible.

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oracle.hpp"

namespace subh {

inline nlohmann::ordered_json check_to_json(const CheckResult& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["spacings"] = c.spacings;
    j["residuals"] = c.residuals;
    j["observed_order"] = c.observed_order;
    j["threshold_order"] = c.threshold_order;
    j["floor"] = c.floor;
    j["exact_class"] = c.exact_class;
    j["pass"] = c.pass;
    if (!c.details.empty()) {
        nlohmann::ordered_json d;
        for (const auto& [k, v] : c.details) d[k] = v;
        j["details"] = d;
    }
    return j;
}

inline nlohmann::ordered_json report_to_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["format"] = "subh verification report v1";
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) checks.push_back(check_to_json(c));
    j["checks"] = checks;
    j["all_pass"] = rep.all_pass;
    return j;
}

// timestamps and per-check wall time, deliberately outside report.json
inline nlohmann::ordered_json report_sidecar_json(const VerificationReport& rep,
                                                  const std::string& timestamp) {
    nlohmann::ordered_json j;
    j["timestamp"] = timestamp;
    nlohmann::ordered_json times;
    for (const auto& c : rep.checks) times[c.name] = c.wall_ms;
    j["wall_ms"] = times;
    return j;
}

inline std::string report_to_text(const VerificationReport& rep) {
    std::ostringstream os;
    for (const auto& c : rep.checks) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(26) << c.name;
        os << "  residual " << std::scientific << std::setprecision(3)
           << (c.residuals.empty() ? 0.0 : c.residuals.back());
        if (c.exact_class)
            os << "  (exact class, floor " << std::scientific << std::setprecision(1) << c.floor
               << ")";
        else
            os << "  order " << std::fixed << std::setprecision(2) << c.observed_order;
        os << "\n";
    }
    os << (rep.all_pass ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return os.str();
}

}  // namespace subh
