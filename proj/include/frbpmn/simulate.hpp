#pragma once

// Seeded token-game execution emitting evidence traces, with attack injectors.
//
// Attacks find their point of application through threat annotations whose
// label is the attack name:
//   InterceptResponse   message flow: the request is dropped and the attacker
//                       answers on the first message flow from the receiving
//                       pool back to the sender pool
//   InjectPermit        data store: its evidence sources emit records with no
//                       process execution behind them
//   BypassEntry         message flow: the run starts at the receiving node with
//                       a forged message, no start event fires
//   ImpersonatePayment  message flow: same entry mechanism as BypassEntry
//   RepudiateRecord     data object: after the run, its latest hardened record
//                       is deleted while the proof record stays
// A threat annotation with the attack label on a sequence flow forces that
// branch whenever its XOR gateway fires under the attack.

#include <cctype>
#include <cstdint>
#include <ctime>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "frbpmn/emission.hpp"
#include "frbpmn/error.hpp"
#include "frbpmn/flow_graph.hpp"
#include "frbpmn/model.hpp"
#include "frbpmn/trace.hpp"

namespace frbpmn {

enum class Attack { InterceptResponse, InjectPermit, BypassEntry, ImpersonatePayment, RepudiateRecord };

inline constexpr Attack kAllAttacks[] = {Attack::InterceptResponse, Attack::InjectPermit, Attack::BypassEntry,
                                         Attack::ImpersonatePayment, Attack::RepudiateRecord};

inline std::string_view to_string(Attack a) {
    switch (a) {
        case Attack::InterceptResponse: return "InterceptResponse";
        case Attack::InjectPermit: return "InjectPermit";
        case Attack::BypassEntry: return "BypassEntry";
        case Attack::ImpersonatePayment: return "ImpersonatePayment";
        case Attack::RepudiateRecord: return "RepudiateRecord";
    }
    return "?";
}

/// Accepts the attack name in any letter case.
inline Attack parse_attack(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    for (Attack a : kAllAttacks)
        if (lower(to_string(a)) == lower(name)) return a;
    throw ConfigError("unknown attack '" + std::string(name) + "'");
}

struct SimConfig {
    std::uint64_t runs = 1;
    std::uint64_t seed = 0;
    std::optional<Attack> attack;
};

/// Instance id of run `run` (0-based), zero-padded to the width of `runs`.
inline std::string instance_id(std::uint64_t run, std::uint64_t runs) {
    std::string n = std::to_string(run + 1);
    std::size_t width = std::to_string(runs).size();
    if (n.size() < width) n.insert(0, width - n.size(), '0');
    return "run-" + n;
}

/// Synthetic timestamp: Unix epoch plus `seconds`.
inline std::string synthetic_timestamp(std::uint64_t seconds) {
    std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

struct AttackTargets {
    std::vector<std::string> elements;  // annotated element ids, model order
    std::set<std::string> forced_flows;
};

inline AttackTargets attack_targets(const ProcessModel& model, const ModelIndex& index, Attack attack) {
    AttackTargets t;
    for (const auto& a : model.security_annotations) {
        if (a.kind != AnnotationKind::Threat || a.label != to_string(attack)) continue;
        if (index.kind_of(a.element_ref) == ElementKind::SequenceFlow)
            t.forced_flows.insert(a.element_ref);
        else
            t.elements.push_back(a.element_ref);
    }
    return t;
}

template <typename Pred>
std::string first_target(const AttackTargets& t, Attack attack, std::string_view what, Pred pred) {
    for (const auto& id : t.elements)
        if (pred(id)) return id;
    throw ConfigError("attack " + std::string(to_string(attack)) + " needs a threat annotation labelled '" +
                      std::string(to_string(attack)) + "' on a " + std::string(what));
}

class Simulator {
public:
    Simulator(const ProcessModel& model, const SimConfig& config)
        : model_(model), config_(config), index_(model), graph_(model), plan_(model, graph_), rng_(config.seed) {
        if (!graph_.is_acyclic()) throw UnsupportedModelError("cannot simulate a model whose flow graph is cyclic");
        if (config.runs == 0) throw ConfigError("runs must be positive");
        if (config.attack) prepare_attack(*config.attack);
    }

    EvidenceTrace run() {
        EvidenceTrace trace;
        for (std::uint64_t r = 0; r < config_.runs; ++r) {
            Instance inst{instance_id(r, config_.runs), {}};
            if (config_.attack == Attack::InjectPermit) {
                inject_store_records(inst);
            } else {
                play(inst);
                if (config_.attack == Attack::RepudiateRecord) repudiate(inst);
            }
            trace.records.insert(trace.records.end(), inst.records.begin(), inst.records.end());
        }
        trace.normalize();
        return trace;
    }

private:
    struct Instance {
        std::string id;
        std::vector<EvidenceRecord> records;
    };

    void prepare_attack(Attack attack) {
        auto t = attack_targets(model_, index_, attack);
        for (const auto& f : t.forced_flows)
            if (auto p = graph_.place(f)) forced_.insert(*p);
        auto is_message_flow = [&](const std::string& id) {
            auto p = graph_.place(id);
            return p && graph_.is_message_place(*p);
        };
        switch (attack) {
            case Attack::InterceptResponse: {
                auto p = *graph_.place(first_target(t, attack, "message flow", is_message_flow));
                const Pool* sender = index_.pool_of(graph_.node_id(graph_.place_source(p)));
                const Pool* receiver = index_.pool_of(graph_.node_id(graph_.place_target(p)));
                for (std::size_t q = 0; q < graph_.place_count() && !reply_; ++q) {
                    if (!graph_.is_message_place(q)) continue;
                    if (index_.pool_of(graph_.node_id(graph_.place_source(q))) == receiver &&
                        index_.pool_of(graph_.node_id(graph_.place_target(q))) == sender)
                        reply_ = q;
                }
                if (!reply_)
                    throw ConfigError("InterceptResponse: no message flow answers '" + graph_.place_id(p) + "'");
                intercepted_ = p;
                break;
            }
            case Attack::BypassEntry:
            case Attack::ImpersonatePayment:
                entry_ = *graph_.place(first_target(t, attack, "message flow", is_message_flow));
                break;
            case Attack::InjectPermit:
                store_ = first_target(t, attack, "data store",
                                      [&](const std::string& id) { return index_.data_store(id) != nullptr; });
                break;
            case Attack::RepudiateRecord:
                repudiated_ = first_target(t, attack, "data object",
                                           [&](const std::string& id) { return index_.data_object(id) != nullptr; });
                break;
        }
    }

    void play(Instance& inst) {
        FlowGraph::Marking m = graph_.initial_marking(!entry_);
        if (entry_) {
            ++m.tokens[*entry_];
            std::size_t v = graph_.place_target(*entry_);
            if (!graph_.seq_in(v).empty()) ++m.tokens[graph_.seq_in(v).front()];
        }
        for (;;) {
            auto enabled = graph_.enabled_nodes(m);
            if (enabled.empty()) break;
            std::size_t v = enabled[rng_() % enabled.size()];
            std::size_t choice = 0;
            if (std::size_t n = graph_.choices(v); n > 1) {
                choice = rng_() % n;
                const auto& out = graph_.seq_out(v);
                for (std::size_t i = 0; i < out.size(); ++i)
                    if (forced_.count(out[i])) choice = i;
            }
            graph_.fire(m, v, choice);
            if (intercepted_ && m.tokens[*intercepted_] > 0) {
                --m.tokens[*intercepted_];
                ++m.tokens[*reply_];
            }
            for (const auto& key : plan_.block(v)) emit(inst, key);
        }
    }

    void emit(Instance& inst, const EvidenceKey& key) {
        EvidenceRecord r;
        r.instance = inst.id;
        r.seq = inst.records.size() + 1;
        r.record_id = inst.id + "." + std::to_string(r.seq);
        r.source = key.first;
        r.data = key.second;
        r.ts = synthetic_timestamp(r.seq);
        if (auto it = relations_.hardens_of.find(key.second); it != relations_.hardens_of.end()) {
            // Strengthen the latest record of a hardened data object that has no proof yet.
            const EvidenceRecord* latest = nullptr;
            const EvidenceRecord* latest_open = nullptr;
            for (const auto& prev : inst.records) {
                if (!it->second.count(prev.data)) continue;
                latest = &prev;
                if (!proven_.count(prev.record_id)) latest_open = &prev;
            }
            if (const EvidenceRecord* target = latest_open ? latest_open : latest) {
                r.hardens = target->record_id;
                proven_.insert(target->record_id);
            }
        }
        inst.records.push_back(std::move(r));
    }

    void inject_store_records(Instance& inst) {
        for (const auto& source : model_.evidence_sources) {
            if (source.host_ref != store_) continue;
            for (const auto& entry : source.data)
                if (index_.data_object(entry.data_ref)) emit(inst, {source.id, entry.data_ref});
        }
    }

    void repudiate(Instance& inst) {
        std::set<std::string> proven;
        for (const auto& r : inst.records)
            if (r.hardens) proven.insert(*r.hardens);
        for (auto it = inst.records.rbegin(); it != inst.records.rend(); ++it) {
            if (it->data == repudiated_ && proven.count(it->record_id)) {
                inst.records.erase(std::next(it).base());
                return;
            }
        }
    }

    const ProcessModel& model_;
    SimConfig config_;
    ModelIndex index_;
    FlowGraph graph_;
    EmissionPlan plan_;
    EvidenceRelations relations_{model_};
    std::mt19937_64 rng_;
    std::set<std::string> proven_;
    std::set<std::size_t> forced_;
    std::optional<std::size_t> intercepted_, reply_, entry_;
    std::string store_, repudiated_;
};

}  // namespace detail

/// Runs `config.runs` instances under one seeded generator. Deterministic:
/// equal (model, config) give equal traces.
inline EvidenceTrace simulate(const ProcessModel& model, const SimConfig& config) {
    return detail::Simulator(model, config).run();
}

}  // namespace frbpmn
