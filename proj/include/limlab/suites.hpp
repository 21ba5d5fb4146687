#pragma once

// Built-in reproduction suites, one or more acceptance criteria each.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limlab/serialize.hpp"

namespace limlab {

struct SuiteOptions {
    std::uint64_t seed = 1;
    long samples = 4096;
    int rays = 64;
    /// Overrides for the lemma-3-5 suite.
    std::optional<WeightSpec> weight;
    std::optional<double> p;
    std::optional<int> i_max;
};

struct Check {
    std::string name;
    bool passed = false;
    Json detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    bool passed() const;
};

struct SuiteReport {
    std::string suite;
    std::vector<CriterionResult> criteria;
    bool passed() const;
};

/// remark-1-1, uspenskii, lemma-3-5, fefferman-product, radial-thm, estimators.
const std::vector<std::string>& suite_names();

/// Throws SpecError for unknown names and PreconditionError when an override violates a precondition.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

Json to_json(const SuiteReport& report);

}  // namespace limlab
