#pragma once

// Text, JSON and Markdown renderings of analysis results.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frbpmn/conformance.hpp"
#include "frbpmn/model.hpp"
#include "frbpmn/risk_analysis.hpp"
#include "frbpmn/risk_register.hpp"
#include "frbpmn/validator.hpp"

namespace frbpmn::report {

using Json = nlohmann::ordered_json;

namespace ansi {
inline constexpr std::string_view red = "\x1b[31m";
inline constexpr std::string_view yellow = "\x1b[33m";
inline constexpr std::string_view cyan = "\x1b[36m";
inline constexpr std::string_view green = "\x1b[32m";
inline constexpr std::string_view reset = "\x1b[0m";
}  // namespace ansi

inline std::string paint(std::string_view text, std::string_view color, bool enabled) {
    if (!enabled) return std::string(text);
    return std::string(color) + std::string(text) + std::string(ansi::reset);
}

inline std::string plural(std::size_t n, std::string_view word) {
    return std::to_string(n) + " " + std::string(word) + (n == 1 ? "" : "s");
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// ---- validation -----------------------------------------------------------

inline Json findings_json(const std::vector<Finding>& findings) {
    Json arr = Json::array();
    for (const auto& f : findings)
        arr.push_back({{"ruleId", f.rule_id},
                       {"severity", to_string(f.severity)},
                       {"elements", f.element_refs},
                       {"message", f.message}});
    return arr;
}

inline std::string findings_summary(const std::vector<Finding>& findings) {
    return plural(count_severity(findings, Severity::Error), "error") + ", " +
           plural(count_severity(findings, Severity::Warning), "warning") + ", " +
           plural(count_severity(findings, Severity::Hint), "hint");
}

inline std::string findings_text(const std::vector<Finding>& findings, bool color = false) {
    std::ostringstream os;
    for (const auto& f : findings) {
        std::string_view c = f.severity == Severity::Error     ? ansi::red
                              : f.severity == Severity::Warning ? ansi::yellow
                                                                : ansi::cyan;
        std::string sev = lower(to_string(f.severity));
        sev.resize(7, ' ');
        os << paint(sev, c, color) << ' ' << f.rule_id;
        if (!f.element_refs.empty()) {
            os << " [";
            for (std::size_t i = 0; i < f.element_refs.size(); ++i) os << (i ? ", " : "") << f.element_refs[i];
            os << ']';
        }
        os << ": " << f.message << '\n';
    }
    os << findings_summary(findings) << '\n';
    return os.str();
}

// ---- coverage -------------------------------------------------------------

inline Json context_refs_json(const std::vector<ContextRef>& refs) {
    Json arr = Json::array();
    for (const auto& r : refs) arr.push_back({{"sourceId", r.source_id}, {"dataId", r.data_id}});
    return arr;
}

inline Json coverage_json(const CoverageReport& report) {
    Json per_case = Json::object();
    Json cases = Json::array();
    for (const auto& c : report.cases) {
        per_case[c.case_id] = to_string(c.status);
        cases.push_back({{"id", c.case_id},
                         {"category", lower(to_string(c.category))},
                         {"status", to_string(c.status)},
                         {"resolved", context_refs_json(c.resolved)},
                         {"dangling", context_refs_json(c.dangling)}});
    }
    const auto& s = report.summary;
    return {{"perCase", per_case},
            {"cases", cases},
            {"summary",
             {{"total", s.total},
              {"covered", s.covered},
              {"uncovered", s.uncovered},
              {"dangling", s.dangling},
              {"unknownTotal", s.unknown_total},
              {"unknownCovered", s.unknown_covered}}}};
}

inline std::string coverage_text(const CoverageReport& report, bool color = false) {
    std::size_t width = 4;
    for (const auto& c : report.cases) width = std::max(width, c.case_id.size());
    auto pad = [](std::string s, std::size_t n) {
        if (s.size() < n) s.resize(n, ' ');
        return s;
    };
    std::ostringstream os;
    os << pad("case", width) << "  " << pad("category", 9) << "  status\n";
    for (const auto& c : report.cases) {
        std::string_view col = c.status == CoverageStatus::Covered     ? ansi::green
                               : c.status == CoverageStatus::Uncovered ? ansi::red
                                                                       : ansi::yellow;
        os << pad(c.case_id, width) << "  " << pad(lower(to_string(c.category)), 9) << "  "
           << paint(to_string(c.status), col, color);
        if (!c.resolved.empty()) os << " (" << plural(c.resolved.size(), "context") << ")";
        for (const auto& d : c.dangling) os << " [no context " << d.source_id << "/" << d.data_id << "]";
        os << '\n';
    }
    const auto& s = report.summary;
    os << plural(s.total, "case") << ": " << s.covered << " covered, " << s.uncovered << " uncovered, " << s.dangling
       << " dangling\n";
    if (s.unknown_total)
        os << "unknown-risk cases (advisory): " << s.unknown_covered << "/" << s.unknown_total << " covered\n";
    return os.str();
}

// ---- evidence diff --------------------------------------------------------

inline Json diff_json(const EvidenceDiff& diff) {
    auto keys = [](const std::vector<ContextKey>& v) {
        Json arr = Json::array();
        for (const auto& k : v) arr.push_back({{"hostRef", k.host_ref}, {"dataRef", k.data_ref}});
        return arr;
    };
    return {{"added", keys(diff.added)}, {"removed", keys(diff.removed)}, {"converged", diff.converged}};
}

inline std::string diff_text(const EvidenceDiff& diff, bool color = false) {
    std::ostringstream os;
    for (const auto& k : diff.added) os << paint("+ ", ansi::green, color) << k.host_ref << " / " << k.data_ref << '\n';
    for (const auto& k : diff.removed) os << paint("- ", ansi::red, color) << k.host_ref << " / " << k.data_ref << '\n';
    os << plural(diff.added.size(), "context") << " added, " << diff.removed.size() << " removed; "
       << (diff.converged ? "converged" : "not converged") << '\n';
    return os.str();
}

// ---- conformance ----------------------------------------------------------

inline Json conformance_json(const ConformanceReport& report, std::size_t instances_checked) {
    Json per = Json::object();
    for (const auto& [instance, iocs] : report.per_instance) {
        Json arr = Json::array();
        for (const auto& i : iocs)
            arr.push_back({{"kind", to_string(i.kind)}, {"details", i.details}, {"recordIds", i.record_ids}});
        per[instance] = arr;
    }
    return {{"instancesChecked", instances_checked}, {"iocCount", report.ioc_count()}, {"perInstance", per}};
}

inline std::string conformance_text(const ConformanceReport& report, std::size_t instances_checked,
                                    bool color = false) {
    std::ostringstream os;
    for (const auto& [instance, iocs] : report.per_instance)
        for (const auto& i : iocs)
            os << instance << ": " << paint(to_string(i.kind), ansi::red, color) << ": " << i.details << '\n';
    if (report.empty())
        os << "no indicators of compromise in " << plural(instances_checked, "instance") << '\n';
    else
        os << plural(report.ioc_count(), "indicator") << " of compromise in " << report.per_instance.size() << " of "
           << plural(instances_checked, "instance") << '\n';
    return os.str();
}

// ---- dispute claims -------------------------------------------------------

inline Json verdict_json(const DisputeClaim& claim, ClaimVerdict verdict) {
    return {{"instance", claim.instance},
            {"data", claim.data},
            {"asserted", to_string(claim.asserted)},
            {"verdict", to_string(verdict)}};
}

inline std::string verdict_text(const DisputeClaim& claim, ClaimVerdict verdict) {
    return "claim '" + claim.data + " " + std::string(to_string(claim.asserted)) + "' in " + claim.instance + ": " +
           std::string(to_string(verdict)) + '\n';
}

// ---- evidence map ---------------------------------------------------------

namespace detail {

inline std::string md_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out.empty() ? "-" : out;
}

inline std::string element_label(const ModelIndex& index, const std::string& id) {
    std::string name;
    if (auto v = index.node(id)) name = v->name;
    else if (auto d = index.data_object(id)) name = d->name;
    else if (auto s = index.data_store(id)) name = s->name;
    return name.empty() ? "`" + id + "`" : name + " (`" + id + "`)";
}

}  // namespace detail

/// Markdown evidence map for investigators: one section per evidence context
/// with its documentation, the associations touching its data and the risks
/// that list it as covering.
inline std::string evidence_map_markdown(const ProcessModel& model, const std::vector<RiskCase>* risks = nullptr) {
    ModelIndex index(model);
    auto contexts = evidence_contexts(model);
    std::ostringstream os;
    os << "# Evidence map: " << (model.id.empty() ? "model" : model.id) << "\n\n";
    os << plural(contexts.size(), "evidence context") << ".\n";

    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const auto& ctx = contexts[i];
        os << "\n## " << (i + 1) << ". " << detail::element_label(index, ctx.data->id) << " from `" << ctx.source->id
           << "`\n\n";
        os << "- Host: " << detail::element_label(index, ctx.source->host_ref);
        if (const Pool* p = index.pool_of(ctx.source->host_ref)) os << ", pool " << (p->name.empty() ? p->id : p->name);
        os << "\n- Persistent: " << (ctx.data->persistent ? "yes" : "no") << "\n";

        const EvidenceMeta* meta = nullptr;
        for (const auto& e : ctx.source->data)
            if (e.data_ref == ctx.data->id && e.meta) meta = &*e.meta;
        if (meta) {
            os << "\n| Property | Value |\n|---|---|\n";
            os << "| Content | " << detail::md_escape(meta->content) << " |\n";
            os << "| Format | " << detail::md_escape(meta->format) << " |\n";
            os << "| Storage location | " << detail::md_escape(meta->storage_location) << " |\n";
            os << "| Access control | " << detail::md_escape(meta->access_control) << " |\n";
            os << "| Retention | " << detail::md_escape(meta->retention) << " |\n";
        } else {
            os << "\nNo documentation attached.\n";
        }

        std::vector<std::string> assoc;
        for (const auto& a : model.evidence_associations) {
            if (a.from_data_ref != ctx.data->id && a.to_data_ref != ctx.data->id) continue;
            std::string line = "`" + a.id + "`: ";
            if (a.kind == AssociationKind::Dependence)
                line += "`" + a.from_data_ref + "` must occur before `" + a.to_data_ref + "`";
            else
                line += "`" + a.from_data_ref + "` hardens `" + a.to_data_ref + "`" +
                        (a.measure ? " (" + std::string(to_string(*a.measure)) + ")" : "");
            assoc.push_back(std::move(line));
        }
        os << "\nAssociations:";
        if (assoc.empty()) os << " none\n";
        else {
            os << '\n';
            for (const auto& l : assoc) os << "- " << l << '\n';
        }

        if (risks) {
            std::vector<std::string> covered;
            for (const auto& r : *risks)
                for (const auto& c : r.covering_contexts)
                    if (c.source_id == ctx.source->id && c.data_id == ctx.data->id) {
                        covered.push_back(r.id + " " + r.title);
                        break;
                    }
            os << "\nCovers risks:";
            if (covered.empty()) os << " none\n";
            else {
                os << '\n';
                for (const auto& c : covered) os << "- " << c << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace frbpmn::report
