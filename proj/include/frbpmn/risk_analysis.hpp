#pragma once

// Risk coverage over a register and evidence diffing between iterations of
// the forensic-ready risk analysis loop.

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "frbpmn/model.hpp"
#include "frbpmn/risk_register.hpp"

namespace frbpmn {

enum class CoverageStatus { Covered, Uncovered, DanglingContext };

inline std::string_view to_string(CoverageStatus s) {
    switch (s) {
        case CoverageStatus::Covered: return "Covered";
        case CoverageStatus::Uncovered: return "Uncovered";
        case CoverageStatus::DanglingContext: return "DanglingContext";
    }
    return "?";
}

struct CaseCoverage {
    std::string case_id;
    RiskCategory category = RiskCategory::Unknown;
    CoverageStatus status = CoverageStatus::Uncovered;
    std::vector<ContextRef> resolved;  // covering contexts present in the model
    std::vector<ContextRef> dangling;  // known source, but not paired with that data

    bool operator==(const CaseCoverage&) const = default;
};

struct CoverageSummary {
    std::size_t total = 0;
    std::size_t covered = 0;
    std::size_t uncovered = 0;
    std::size_t dangling = 0;
    // Unknown-category cases are advisory and counted separately as well.
    std::size_t unknown_total = 0;
    std::size_t unknown_covered = 0;

    bool operator==(const CoverageSummary&) const = default;
};

struct CoverageReport {
    std::vector<CaseCoverage> cases;  // register order
    CoverageSummary summary;

    const CaseCoverage* find(std::string_view case_id) const {
        for (const auto& c : cases)
            if (c.case_id == case_id) return &c;
        return nullptr;
    }
};

/// Classifies every case of the register against the model's evidence contexts.
///
/// A case is Covered when at least one of its covering contexts exists in the
/// model. Otherwise it is DanglingContext when some covering context names an
/// evidence source that exists but does not produce the named data object (a
/// register/model mismatch), and Uncovered when the named evidence simply is
/// not in the model yet.
inline CoverageReport coverage(const ProcessModel& model, const std::vector<RiskCase>& risks) {
    ModelIndex index(model);
    std::set<ContextRef> present;
    for (const auto& ctx : evidence_contexts(model)) present.insert({ctx.source->id, ctx.data->id});

    CoverageReport report;
    for (const auto& risk : risks) {
        CaseCoverage cc;
        cc.case_id = risk.id;
        cc.category = risk.category;
        for (const auto& ref : risk.covering_contexts) {
            if (present.count(ref))
                cc.resolved.push_back(ref);
            else if (index.evidence_source(ref.source_id))
                cc.dangling.push_back(ref);
        }
        if (!cc.resolved.empty())
            cc.status = CoverageStatus::Covered;
        else if (!cc.dangling.empty())
            cc.status = CoverageStatus::DanglingContext;
        else
            cc.status = CoverageStatus::Uncovered;

        auto& s = report.summary;
        ++s.total;
        s.covered += cc.status == CoverageStatus::Covered;
        s.uncovered += cc.status == CoverageStatus::Uncovered;
        s.dangling += cc.status == CoverageStatus::DanglingContext;
        if (risk.category == RiskCategory::Unknown) {
            ++s.unknown_total;
            s.unknown_covered += cc.status == CoverageStatus::Covered;
        }
        report.cases.push_back(std::move(cc));
    }
    return report;
}

/// Evidence context identity across model versions.
struct ContextKey {
    std::string host_ref;
    std::string data_ref;

    bool operator==(const ContextKey&) const = default;
    auto operator<=>(const ContextKey&) const = default;
};

struct EvidenceDiff {
    std::vector<ContextKey> added;    // after-model order
    std::vector<ContextKey> removed;  // before-model order
    bool converged = true;            // no new evidence source data was added

    bool operator==(const EvidenceDiff&) const = default;
};

namespace detail {

inline std::vector<ContextKey> context_keys(const ProcessModel& model) {
    std::vector<ContextKey> out;
    std::set<ContextKey> seen;
    for (const auto& ctx : evidence_contexts(model)) {
        ContextKey k{ctx.source->host_ref, ctx.data->id};
        if (seen.insert(k).second) out.push_back(std::move(k));
    }
    return out;
}

}  // namespace detail

inline EvidenceDiff evidence_diff(const ProcessModel& before, const ProcessModel& after) {
    auto b = detail::context_keys(before);
    auto a = detail::context_keys(after);
    std::set<ContextKey> bs(b.begin(), b.end());
    std::set<ContextKey> as(a.begin(), a.end());
    EvidenceDiff diff;
    for (const auto& k : a)
        if (!bs.count(k)) diff.added.push_back(k);
    for (const auto& k : b)
        if (!as.count(k)) diff.removed.push_back(k);
    diff.converged = diff.added.empty();
    return diff;
}

}  // namespace frbpmn
