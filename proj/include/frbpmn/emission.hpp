#pragma once

// Which evidence records a node firing emits, and in what order.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frbpmn/flow_graph.hpp"
#include "frbpmn/model.hpp"

namespace frbpmn {

/// A record type: (evidence source id, data object id).
using EvidenceKey = std::pair<std::string, std::string>;

/// Evidence relations resolved to data object ids.
struct EvidenceRelations {
    std::vector<const EvidenceAssociation*> dependences;
    std::map<std::string, std::set<std::string>> proofs_of;    // hardened data -> proof data
    std::map<std::string, std::set<std::string>> hardens_of;   // proof data -> hardened data

    explicit EvidenceRelations(const ProcessModel& model) {
        for (const auto& a : model.evidence_associations) {
            if (a.kind == AssociationKind::Dependence) {
                dependences.push_back(&a);
            } else {
                proofs_of[a.to_data_ref].insert(a.from_data_ref);
                hardens_of[a.from_data_ref].insert(a.to_data_ref);
            }
        }
    }

    bool is_proof(const std::string& data) const { return hardens_of.count(data) > 0; }
};

/// Per-node emission blocks indexed like FlowGraph nodes.
///
/// Within one firing, records follow model order of sources and their data,
/// adjusted so that dependence origins come before their targets and hardened
/// data before its proofs.
class EmissionPlan {
public:
    EmissionPlan(const ProcessModel& model, const FlowGraph& graph) : blocks_(graph.node_count()) {
        ModelIndex index(model);
        for (const auto& source : model.evidence_sources) {
            for (const auto& emitter : source_emitters(index, source)) {
                auto v = graph.node(emitter);
                if (!v) continue;
                for (const auto& entry : source.data)
                    if (index.data_object(entry.data_ref)) blocks_[*v].push_back({source.id, entry.data_ref});
            }
        }
        EvidenceRelations rel(model);
        std::vector<std::pair<std::string, std::string>> before;  // (first, second) on data ids
        for (const auto* d : rel.dependences) before.emplace_back(d->from_data_ref, d->to_data_ref);
        for (const auto& [proof, targets] : rel.hardens_of)
            for (const auto& t : targets) before.emplace_back(t, proof);
        for (auto& block : blocks_) order_block(block, before);
    }

    const std::vector<EvidenceKey>& block(std::size_t v) const { return blocks_[v]; }
    std::size_t node_count() const noexcept { return blocks_.size(); }

private:
    // Stable topological order: repeatedly take the first entry with no
    // pending predecessor; cycles fall back to the original order.
    static void order_block(std::vector<EvidenceKey>& block,
                            const std::vector<std::pair<std::string, std::string>>& before) {
        if (block.size() < 2) return;
        std::vector<EvidenceKey> out;
        std::vector<bool> taken(block.size(), false);
        while (out.size() < block.size()) {
            std::size_t pick = block.size();
            for (std::size_t i = 0; i < block.size() && pick == block.size(); ++i) {
                if (taken[i]) continue;
                bool blocked = false;
                for (std::size_t j = 0; j < block.size() && !blocked; ++j) {
                    if (taken[j] || j == i) continue;
                    for (const auto& [first, second] : before)
                        if (first == block[j].second && second == block[i].second && first != second) blocked = true;
                }
                if (!blocked) pick = i;
            }
            if (pick == block.size())
                for (std::size_t i = 0; i < block.size(); ++i)
                    if (!taken[i]) {
                        pick = i;
                        break;
                    }
            taken[pick] = true;
            out.push_back(block[pick]);
        }
        block = std::move(out);
    }

    std::vector<std::vector<EvidenceKey>> blocks_;
};

}  // namespace frbpmn
