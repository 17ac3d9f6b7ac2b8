#pragma once

// Trace conformance against the annotated model and dispute-claim resolution.
//
// Per instance:
//   C1 every record of a dependence target has an earlier record of its origin
//   C2 every record of a hardened data object has a proof record pointing at it
//   C3 the (source, data) sequence is producible by some nominal run
//   C4 every `hardens` reference points at an earlier record of the instance

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "frbpmn/emission.hpp"
#include "frbpmn/error.hpp"
#include "frbpmn/flow_graph.hpp"
#include "frbpmn/model.hpp"
#include "frbpmn/trace.hpp"

namespace frbpmn {

enum class IoCKind { DependenceViolated, HardeningMissing, NoNominalExplanation, DanglingProof };

inline std::string_view to_string(IoCKind k) {
    switch (k) {
        case IoCKind::DependenceViolated: return "DependenceViolated";
        case IoCKind::HardeningMissing: return "HardeningMissing";
        case IoCKind::NoNominalExplanation: return "NoNominalExplanation";
        case IoCKind::DanglingProof: return "DanglingProof";
    }
    return "?";
}

/// Indicator of compromise.
struct IoC {
    IoCKind kind;
    std::string details;
    std::vector<std::string> record_ids;

    bool operator==(const IoC&) const = default;
};

struct ConformanceReport {
    std::map<std::string, std::vector<IoC>> per_instance;  // only instances with IoCs

    bool empty() const noexcept { return per_instance.empty(); }

    std::set<IoCKind> kinds() const {
        std::set<IoCKind> out;
        for (const auto& [_, iocs] : per_instance)
            for (const auto& i : iocs) out.insert(i.kind);
        return out;
    }

    std::size_t ioc_count() const {
        std::size_t n = 0;
        for (const auto& [_, iocs] : per_instance) n += iocs.size();
        return n;
    }
};

/// Decides membership of record sequences in the model's nominal evidence
/// language: the (source, data) sequences emitted by maximal token-game runs
/// from the plain start events, with at most 2 x |nodes| firings.
class NominalLanguage {
public:
    explicit NominalLanguage(const ProcessModel& model)
        : graph_(model), plan_(model, graph_), bound_(2 * graph_.node_count()) {}

    std::size_t bound() const noexcept { return bound_; }

    bool contains(const std::vector<EvidenceKey>& word) const {
        std::unordered_set<std::string> failed;
        auto m = graph_.initial_marking();
        return search(m, 0, 0, word, failed);
    }

private:
    bool search(const FlowGraph::Marking& m, std::size_t pos, std::size_t steps, const std::vector<EvidenceKey>& word,
                std::unordered_set<std::string>& failed) const {
        auto enabled = graph_.enabled_nodes(m);
        if (enabled.empty()) return pos == word.size();
        if (steps >= bound_) return false;
        std::string key = m.key();
        key += '#' + std::to_string(pos) + '#' + std::to_string(steps);
        if (failed.count(key)) return false;
        for (std::size_t v : enabled) {
            const auto& block = plan_.block(v);
            if (pos + block.size() > word.size()) continue;
            bool match = true;
            for (std::size_t i = 0; i < block.size() && match; ++i) match = block[i] == word[pos + i];
            if (!match) continue;
            for (std::size_t c = 0; c < graph_.choices(v); ++c) {
                auto next = m;
                graph_.fire(next, v, c);
                if (search(next, pos + block.size(), steps + 1, word, failed)) return true;
            }
        }
        failed.insert(std::move(key));
        return false;
    }

    FlowGraph graph_;
    EmissionPlan plan_;
    std::size_t bound_;
};

namespace detail {

inline const EvidenceRecord* find_record(const std::vector<EvidenceRecord>& records, const std::string& id) {
    for (const auto& r : records)
        if (r.record_id == id) return &r;
    return nullptr;
}

/// True when `r` has a proof record of an allowed proof data object.
inline bool is_hardened(const std::vector<EvidenceRecord>& records, const EvidenceRecord& r,
                        const std::set<std::string>& proof_data) {
    for (const auto& p : records)
        if (p.hardens == r.record_id && proof_data.count(p.data) && p.seq >= r.seq) return true;
    return false;
}

}  // namespace detail

/// Checks C1 to C4 per instance. Instances absent from the trace are not
/// checked; an empty trace yields an empty report.
inline ConformanceReport check_trace(const ProcessModel& model, const EvidenceTrace& trace) {
    EvidenceRelations rel(model);
    NominalLanguage language(model);
    ConformanceReport report;
    for (const auto& instance : trace.instances()) {
        auto records = trace.instance_records(instance);
        std::vector<IoC> iocs;

        for (const auto* dep : rel.dependences) {
            for (const auto& r : records) {
                if (r.data != dep->to_data_ref) continue;
                bool preceded = false;
                for (const auto& a : records)
                    if (a.data == dep->from_data_ref && a.seq < r.seq) preceded = true;
                if (!preceded)
                    iocs.push_back({IoCKind::DependenceViolated,
                                    "record " + r.record_id + " of '" + r.data + "' has no earlier record of '" +
                                        dep->from_data_ref + "' (" + dep->id + ")",
                                    {r.record_id}});
            }
        }

        for (const auto& r : records) {
            auto it = rel.proofs_of.find(r.data);
            if (it == rel.proofs_of.end()) continue;
            if (!detail::is_hardened(records, r, it->second))
                iocs.push_back({IoCKind::HardeningMissing,
                                "record " + r.record_id + " of '" + r.data + "' has no proof record", {r.record_id}});
        }

        std::vector<EvidenceKey> word;
        for (const auto& r : records) word.emplace_back(r.source, r.data);
        if (!language.contains(word))
            iocs.push_back({IoCKind::NoNominalExplanation,
                            "no nominal run emits this sequence of " + std::to_string(word.size()) + " record(s)",
                            {}});

        for (const auto& p : records) {
            if (!p.hardens) continue;
            const EvidenceRecord* target = detail::find_record(records, *p.hardens);
            if (!target || target->seq > p.seq)
                iocs.push_back({IoCKind::DanglingProof,
                                "proof record " + p.record_id + " hardens '" + *p.hardens +
                                    (target ? "', which is recorded later" : "', which is not in the instance"),
                                {p.record_id}});
        }

        if (!iocs.empty()) report.per_instance.emplace(instance, std::move(iocs));
    }
    return report;
}

enum class Assertion { Present, Absent };
enum class ClaimVerdict { Supported, Refuted, Undecidable };

inline std::string_view to_string(Assertion a) { return a == Assertion::Present ? "present" : "absent"; }

inline std::string_view to_string(ClaimVerdict v) {
    switch (v) {
        case ClaimVerdict::Supported: return "Supported";
        case ClaimVerdict::Refuted: return "Refuted";
        case ClaimVerdict::Undecidable: return "Undecidable";
    }
    return "?";
}

inline Assertion parse_assertion(std::string_view s) {
    if (s == "present") return Assertion::Present;
    if (s == "absent") return Assertion::Absent;
    throw ConfigError("assertion must be 'present' or 'absent', got '" + std::string(s) + "'");
}

/// A party's claim that data existed (or not) in one process instance.
struct DisputeClaim {
    std::string instance;
    std::string data;
    Assertion asserted = Assertion::Present;
};

/// Decides a claim from hardened evidence.
///
/// The data is proven present when one of its records in the instance has an
/// intact proof, or when a proof record that can only harden this data object
/// survives although the record it points at is gone. It is proven absent when
/// it is evidenced by some source and no record exists. Anything else (no
/// evidence context, or only unhardened records) is Undecidable.
inline ClaimVerdict resolve_claim(const ProcessModel& model, const EvidenceTrace& trace, const DisputeClaim& claim) {
    ModelIndex index(model);
    if (!index.data_object(claim.data)) throw ReferenceError({claim.data});
    EvidenceRelations rel(model);

    bool evidenced = false;
    for (const auto& ctx : evidence_contexts(model))
        if (ctx.data->id == claim.data) evidenced = true;

    auto records = trace.instance_records(claim.instance);
    std::set<std::string> proof_data;
    if (auto it = rel.proofs_of.find(claim.data); it != rel.proofs_of.end()) proof_data = it->second;

    bool exists = false;
    bool proven = false;
    for (const auto& r : records) {
        if (r.data != claim.data) continue;
        exists = true;
        if (detail::is_hardened(records, r, proof_data)) proven = true;
    }
    for (const auto& p : records) {
        if (!p.hardens || !proof_data.count(p.data)) continue;
        if (rel.hardens_of.at(p.data).size() != 1) continue;
        if (!detail::find_record(records, *p.hardens)) proven = true;
    }

    if (proven) return claim.asserted == Assertion::Present ? ClaimVerdict::Supported : ClaimVerdict::Refuted;
    if (!exists && evidenced)
        return claim.asserted == Assertion::Absent ? ClaimVerdict::Supported : ClaimVerdict::Refuted;
    return ClaimVerdict::Undecidable;
}

}  // namespace frbpmn
