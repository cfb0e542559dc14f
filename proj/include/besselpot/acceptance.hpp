#pragma once

// The acceptance suite behind `besselpot selftest`. Each criterion reports
// its measured metrics next to the tolerance it is held to. Reports contain
// no timings, so a fixed seed gives byte-identical output.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace besselpot {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    nlohmann::json metrics;
};

struct AcceptanceReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool pass() const;
};

/// Runs criteria 1-11 (12, determinism, needs two processes and lives in the
/// acceptance test). `on_result` fires after each criterion.
AcceptanceReport run_acceptance(std::uint64_t seed, const std::function<void(const CriterionResult&)>& on_result = {});

nlohmann::json to_json(const AcceptanceReport& report);

/// "PASS  3 semigroup law: ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace besselpot
