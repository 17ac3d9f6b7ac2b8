#pragma once

// Static rule checking of annotated models.
//
// Rule catalog:
//   E01 host-kind               evidence source host must be a flow node or data store
//   E02 data-target             evidence data must reference a data object
//   E03 endpoint-evidence       evidence association endpoints must be evidence data of some source
//   E04 dependence-feasibility  for Dependence A->B every nominal run produces A before any B
//   E05 dependence-acyclicity   the Dependence relation is irreflexive and acyclic
//   W01 empty-source            evidence source without data objects
//   W02 cyclic-model            E04 could not be verified because the flow graph has a cycle
//   H01 same-pool-hardening     hardening between data objects of the same pool

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "frbpmn/bpmn_io.hpp"
#include "frbpmn/error.hpp"
#include "frbpmn/flow_graph.hpp"
#include "frbpmn/model.hpp"

namespace frbpmn {

enum class Severity { Error, Warning, Hint };

inline std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Hint: return "hint";
    }
    return "?";
}

struct Finding {
    std::string rule_id;
    Severity severity = Severity::Error;
    std::vector<std::string> element_refs;
    std::string message;

    bool operator==(const Finding&) const = default;
};

struct RuleInfo {
    std::string_view id;
    std::string_view name;
    Severity severity;
};

inline constexpr RuleInfo kRuleCatalog[] = {
    {"E01", "host-kind", Severity::Error},
    {"E02", "data-target", Severity::Error},
    {"E03", "endpoint-evidence", Severity::Error},
    {"E04", "dependence-feasibility", Severity::Error},
    {"E05", "dependence-acyclicity", Severity::Error},
    {"W01", "empty-source", Severity::Warning},
    {"W02", "cyclic-model", Severity::Warning},
    {"H01", "same-pool-hardening", Severity::Hint},
};

enum class PrecedenceVerdict { Guaranteed, NotGuaranteed, Unverified };

inline std::string_view to_string(PrecedenceVerdict v) {
    switch (v) {
        case PrecedenceVerdict::Guaranteed: return "Guaranteed";
        case PrecedenceVerdict::NotGuaranteed: return "NotGuaranteed";
        case PrecedenceVerdict::Unverified: return "Unverified";
    }
    return "?";
}

/// Decides whether, in every nominal run, each firing of a node in `b` is
/// preceded by (or coincides with) a firing of a node in `a`.
///
/// Cyclic graphs are Unverified. Otherwise a node is marked fireable-without-A
/// when it can fire using only inputs from nodes that are themselves
/// fireable-without-A and not in `a` (AND gateways need all sequence inputs,
/// other nodes one, message receivers one message). Any fireable B node means
/// some run reaches it before any A, so the verdict is NotGuaranteed. Nodes in
/// both sets count as satisfying themselves.
///
/// The marking is exact for block-structured graphs, where the inputs of an AND
/// join come from concurrent branches that can always be fired together.
inline PrecedenceVerdict must_precede(const FlowGraph& graph, const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
    auto order = graph.topological_order();
    if (!order) return PrecedenceVerdict::Unverified;
    std::vector<bool> in_a(graph.node_count(), false);
    for (auto v : a) in_a[v] = true;
    std::vector<bool> ok(graph.node_count(), false);
    auto any_src = [&](const std::vector<std::size_t>& places) {
        for (auto p : places)
            if (ok[graph.place_source(p)]) return true;
        return false;
    };
    auto all_src = [&](const std::vector<std::size_t>& places) {
        for (auto p : places)
            if (!ok[graph.place_source(p)]) return false;
        return true;
    };
    for (auto v : *order) {
        if (in_a[v]) continue;
        if (graph.kind(v) == NodeKind::StartEvent) {
            ok[v] = graph.msg_in(v).empty() || any_src(graph.msg_in(v));
            continue;
        }
        const auto& in = graph.seq_in(v);
        if (in.empty()) continue;
        bool seq = graph.kind(v) == NodeKind::AndGateway ? all_src(in) : any_src(in);
        ok[v] = seq && (graph.msg_in(v).empty() || any_src(graph.msg_in(v)));
    }
    for (auto v : b)
        if (!in_a[v] && ok[v]) return PrecedenceVerdict::NotGuaranteed;
    return PrecedenceVerdict::Guaranteed;
}

/// Id-based form. Throws ReferenceError listing ids that are not flow nodes.
inline PrecedenceVerdict must_precede(const ProcessModel& model, const std::vector<std::string>& producers_a,
                                      const std::vector<std::string>& producers_b) {
    FlowGraph graph(model);
    std::vector<std::string> missing;
    auto lookup = [&](const std::vector<std::string>& ids) {
        std::vector<std::size_t> out;
        for (const auto& id : ids) {
            if (auto v = graph.node(id))
                out.push_back(*v);
            else
                missing.push_back(id);
        }
        return out;
    };
    auto a = lookup(producers_a);
    auto b = lookup(producers_b);
    if (!missing.empty()) throw ReferenceError(missing);
    return must_precede(graph, a, b);
}

namespace detail {

inline bool finding_less(const Finding& x, const Finding& y) {
    static const std::string none;
    const std::string& fx = x.element_refs.empty() ? none : x.element_refs.front();
    const std::string& fy = y.element_refs.empty() ? none : y.element_refs.front();
    return std::tie(x.severity, x.rule_id, fx, x.element_refs, x.message) <
           std::tie(y.severity, y.rule_id, fy, y.element_refs, y.message);
}

/// Strongly connected components of the dependence graph (Tarjan).
inline std::vector<std::vector<std::string>> dependence_sccs(const std::map<std::string, std::set<std::string>>& edges) {
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        if (auto it = edges.find(v); it != edges.end()) {
            for (const auto& w : it->second) {
                if (!index.count(w)) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack.count(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> scc;
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                scc.push_back(w);
            } while (w != v);
            out.push_back(std::move(scc));
        }
    };
    for (const auto& [v, _] : edges)
        if (!index.count(v)) visit(v);
    return out;
}

}  // namespace detail

/// Evaluates the whole rule catalog. Total on any model, including models
/// with dangling references; findings only name ids that resolve.
inline std::vector<Finding> validate(const ProcessModel& model) {
    ModelIndex index(model);
    std::vector<Finding> findings;
    auto refs = [&](std::initializer_list<std::string> ids) {
        std::vector<std::string> out;
        for (const auto& id : ids)
            if (index.contains(id) && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        return out;
    };

    std::set<std::string> evidence_data;
    std::set<std::string> bad_host_data;  // data listed by a source whose host violates E01
    for (const auto& s : model.evidence_sources) {
        bool host_ok = index.node(s.host_ref) || index.data_store(s.host_ref);
        if (!host_ok) {
            findings.push_back({"E01", Severity::Error, refs({s.id, s.host_ref}),
                                "evidence source '" + s.id + "' is hosted on '" + s.host_ref +
                                    "', which is neither a flow node nor a data store"});
        }
        if (s.data.empty()) {
            findings.push_back({"W01", Severity::Warning, refs({s.id}),
                                "evidence source '" + s.id + "' has no data objects"});
        }
        for (const auto& d : s.data) {
            if (!index.data_object(d.data_ref)) {
                findings.push_back({"E02", Severity::Error, refs({s.id, d.data_ref}),
                                    "evidence data of source '" + s.id + "' targets '" + d.data_ref +
                                        "', which is not a data object"});
                continue;
            }
            evidence_data.insert(d.data_ref);
            if (!host_ok) bad_host_data.insert(d.data_ref);
        }
    }

    std::set<std::string> e03_assocs;
    for (const auto& a : model.evidence_associations) {
        std::vector<std::string> missing;
        for (const auto* end : {&a.from_data_ref, &a.to_data_ref})
            if (!evidence_data.count(*end)) missing.push_back(*end);
        if (!missing.empty()) {
            std::string msg = "endpoint(s) of " + std::string(to_string(a.kind)) + " association '" + a.id +
                              "' are not evidence data of any source:";
            for (const auto& m : missing) msg += " " + m;
            findings.push_back({"E03", Severity::Error, refs({a.id}), msg});
            e03_assocs.insert(a.id);
        }
        if (a.kind == AssociationKind::Hardening) {
            const Pool* pa = index.data_object(a.from_data_ref) ? index.pool_of(a.from_data_ref) : nullptr;
            const Pool* pb = index.data_object(a.to_data_ref) ? index.pool_of(a.to_data_ref) : nullptr;
            if (pa && pa == pb) {
                findings.push_back({"H01", Severity::Hint, refs({a.id}),
                                    "hardening '" + a.id + "' keeps proof and evidence in the same pool '" + pa->id +
                                        "'; separate pools reduce tampering risk"});
            }
        }
    }

    // E05: self-loops and cycles of the dependence relation.
    std::map<std::string, std::set<std::string>> dep_edges;
    std::set<std::string> cyclic_assocs;
    for (const auto& a : model.evidence_associations) {
        if (a.kind != AssociationKind::Dependence) continue;
        if (a.from_data_ref == a.to_data_ref) {
            findings.push_back({"E05", Severity::Error, refs({a.id}),
                                "dependence '" + a.id + "' relates '" + a.from_data_ref + "' to itself"});
            cyclic_assocs.insert(a.id);
            continue;
        }
        dep_edges[a.from_data_ref].insert(a.to_data_ref);
        dep_edges.try_emplace(a.to_data_ref);
    }
    for (const auto& scc : detail::dependence_sccs(dep_edges)) {
        if (scc.size() < 2) continue;
        std::set<std::string> members(scc.begin(), scc.end());
        std::vector<std::string> ids;
        for (const auto& a : model.evidence_associations) {
            if (a.kind == AssociationKind::Dependence && a.from_data_ref != a.to_data_ref &&
                members.count(a.from_data_ref) && members.count(a.to_data_ref)) {
                ids.push_back(a.id);
                cyclic_assocs.insert(a.id);
            }
        }
        std::string msg = "dependence cycle through associations:";
        for (const auto& id : ids) msg += " " + id;
        findings.push_back({"E05", Severity::Error, ids, msg});
    }

    // E04 / W02 on associations that passed the structural rules.
    FlowGraph graph(model);
    bool acyclic = graph.is_acyclic();
    for (const auto& a : model.evidence_associations) {
        if (a.kind != AssociationKind::Dependence) continue;
        if (e03_assocs.count(a.id) || cyclic_assocs.count(a.id)) continue;
        if (bad_host_data.count(a.from_data_ref) || bad_host_data.count(a.to_data_ref)) continue;
        if (!acyclic) {
            findings.push_back({"W02", Severity::Warning, refs({a.id}),
                                "dependence '" + a.id + "' is unverified: the flow graph contains a cycle"});
            continue;
        }
        auto to_nodes = [&](const std::vector<std::string>& ids) {
            std::vector<std::size_t> out;
            for (const auto& id : ids)
                if (auto v = graph.node(id)) out.push_back(*v);
            return out;
        };
        auto verdict = must_precede(graph, to_nodes(evidence_emitters(index, a.from_data_ref)),
                                    to_nodes(evidence_emitters(index, a.to_data_ref)));
        if (verdict == PrecedenceVerdict::NotGuaranteed) {
            findings.push_back({"E04", Severity::Error, refs({a.id, a.from_data_ref, a.to_data_ref}),
                                "dependence '" + a.id + "': '" + a.to_data_ref +
                                    "' can be produced without '" + a.from_data_ref + "' occurring first"});
        }
    }

    std::sort(findings.begin(), findings.end(), detail::finding_less);
    return findings;
}

inline std::size_t count_severity(const std::vector<Finding>& findings, Severity s) {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == s; }));
}

/// Thrown by parse_checked_bpmn when a parsed model has Error findings.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Finding> findings)
        : Error(format(findings)), findings_(std::move(findings)) {}

    const std::vector<Finding>& findings() const noexcept { return findings_; }

private:
    static std::string format(const std::vector<Finding>& findings) {
        std::string out = "model has error findings:";
        for (const auto& f : findings)
            if (f.severity == Severity::Error) out += " " + f.rule_id;
        return out;
    }

    std::vector<Finding> findings_;
};

/// Parses and rejects models with Error findings, e.g. a dependence whose
/// endpoint has no evidence source (E03). Warnings and hints pass.
inline ProcessModel parse_checked_bpmn(std::string_view xml) {
    auto model = parse_bpmn_xml(xml);
    auto findings = validate(model);
    if (count_severity(findings, Severity::Error)) throw ValidationError(std::move(findings));
    return model;
}

}  // namespace frbpmn
