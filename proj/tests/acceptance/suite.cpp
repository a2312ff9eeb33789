#include "acceptance/suite.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>

namespace c0m::acceptance {

bool matches(const std::string& p, const std::string& s) {
    if (p.empty()) return true;
    // iterative glob with backtracking on the last '*'
    size_t i = 0, j = 0, star = std::string::npos, mark = 0;
    while (j < s.size()) {
        if (i < p.size() && (p[i] == '?' || p[i] == s[j])) {
            ++i;
            ++j;
        } else if (i < p.size() && p[i] == '*') {
            star = i++;
            mark = j;
        } else if (star != std::string::npos) {
            i = star + 1;
            j = ++mark;
        } else {
            return false;
        }
    }
    while (i < p.size() && p[i] == '*') ++i;
    return i == p.size();
}

std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream& out) {
    std::vector<CriterionResult> results;
    for (const Criterion& c : criteria()) {
        if (!matches(filter, c.id)) continue;
        CriterionResult r;
        r.number = c.number;
        r.id = c.id;
        auto t0 = std::chrono::steady_clock::now();
        try {
            Outcome o = c.run();
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char head[160];
        std::snprintf(head, sizeof head, "%s  %2d %-28s %8.2f s  ", r.pass ? "PASS" : "FAIL", r.number,
                      r.id.c_str(), r.seconds);
        out << head << r.detail << std::endl;
        results.push_back(r);
    }
    int passed = 0;
    double total = 0.0;
    for (const auto& r : results) {
        passed += r.pass;
        total += r.seconds;
    }
    out << "summary: {\"passed\": " << passed << ", \"failed\": " << results.size() - passed
        << ", \"seconds\": " << total << ", \"results\": [";
    for (size_t k = 0; k < results.size(); ++k)
        out << (k ? ", " : "") << "{\"id\": \"" << results[k].id << "\", \"pass\": " << (results[k].pass ? "true" : "false")
            << ", \"seconds\": " << results[k].seconds << "}";
    out << "]}" << std::endl;
    return results;
}

}  // namespace c0m::acceptance
