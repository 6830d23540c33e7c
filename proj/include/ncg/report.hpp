#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace ncg {

enum class CheckStatus {
    Pass,
    Fail,
    Trivial,       // satisfied automatically at finite dimension
    NotApplicable, // vacuous or undefined at finite dimension
    NotSupplied,   // optional structure absent, check skipped
};

inline const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Trivial: return "trivial";
    case CheckStatus::NotApplicable: return "not-applicable";
    case CheckStatus::NotSupplied: return "not-supplied";
    }
    return "?";
}

// One validated condition. `residual` is the worst-case numerical defect
// (0 for exact set-level checks); validators always report it, never just
// a boolean.
struct CheckEntry {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double residual = 0.0;
    std::string detail;
};

struct Report {
    std::string subject;
    std::vector<CheckEntry> entries;

    void add(std::string name, CheckStatus status, double residual = 0.0,
             std::string detail = {}) {
        entries.push_back({std::move(name), status, residual, std::move(detail)});
    }

    void add_residual(std::string name, double residual, double tol,
                      std::string detail = {}) {
        add(std::move(name), residual <= tol ? CheckStatus::Pass : CheckStatus::Fail,
            residual, std::move(detail));
    }

    bool passed() const {
        return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) {
            return e.status == CheckStatus::Fail;
        });
    }

    double worst_residual() const {
        double w = 0.0;
        for (const auto& e : entries) w = std::max(w, e.residual);
        return w;
    }

    const CheckEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }

    void merge(const Report& other, const std::string& prefix = {}) {
        for (auto e : other.entries) {
            if (!prefix.empty()) e.name = prefix + e.name;
            entries.push_back(std::move(e));
        }
    }
};

} // namespace ncg
