#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace c0m::acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int number = 0;
    std::string id;        // e.g. "mass.identity"
    std::string summary;
    std::function<Outcome()> run;
};

struct CriterionResult {
    int number = 0;
    std::string id;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

const std::vector<Criterion>& criteria();

// glob over ids ('*' and '?'); empty selects everything
bool matches(const std::string& pattern, const std::string& id);

// one PASS/FAIL line per criterion as it finishes, then a machine-readable summary
std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream& out);

}  // namespace c0m::acceptance
