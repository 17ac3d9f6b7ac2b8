#pragma once

// Shared test helpers: fixture access, model mutations, a random workflow
// generator and a brute-force run enumerator that serves as the oracle for
// precedence and nominal-language membership. Free of any test framework so the
// acceptance binary can use it too.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "frbpmn/frbpmn.hpp"

namespace frbpmn::testing {

inline std::string fixture_path(const std::string& name) { return std::string(FRBPMN_FIXTURES) + "/" + name; }

inline ProcessModel load_fixture(const std::string& name) { return load_bpmn_file(fixture_path(name)); }

inline const nlohmann::json& expectations() {
    static const nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("expectations.json")));
    return doc;
}

inline std::vector<std::string> rule_ids(const std::vector<Finding>& findings) {
    std::vector<std::string> out;
    for (const auto& f : findings) out.push_back(f.rule_id);
    return out;
}

// ---- model surgery --------------------------------------------------------

inline EvidenceSource* find_source(ProcessModel& m, const std::string& id) {
    for (auto& s : m.evidence_sources)
        if (s.id == id) return &s;
    return nullptr;
}

inline EvidenceAssociation* find_association(ProcessModel& m, const std::string& id) {
    for (auto& a : m.evidence_associations)
        if (a.id == id) return &a;
    return nullptr;
}

/// Applies one mutation of the form used in expectations.json. Returns false
/// when the mutation names something the model does not have.
inline bool apply_mutation(ProcessModel& m, const nlohmann::json& mut) {
    const std::string op = mut.at("op");
    if (op == "remove_source") {
        auto& v = m.evidence_sources;
        auto it = std::find_if(v.begin(), v.end(), [&](const auto& s) { return s.id == mut.at("source"); });
        if (it == v.end()) return false;
        v.erase(it);
        return true;
    }
    if (op == "retarget") {
        auto* a = find_association(m, mut.at("association"));
        if (!a) return false;
        (mut.at("end") == "from" ? a->from_data_ref : a->to_data_ref) = mut.at("data");
        return true;
    }
    if (op == "rehost") {
        auto* s = find_source(m, mut.at("source"));
        if (!s) return false;
        s->host_ref = mut.at("host");
        return true;
    }
    if (op == "set_data") {
        auto* s = find_source(m, mut.at("source"));
        if (!s) return false;
        s->data.clear();
        for (const auto& d : mut.at("data")) s->data.push_back({d.get<std::string>(), std::nullopt});
        return true;
    }
    if (op == "add_source") {
        EvidenceSource s{mut.at("source"), mut.at("host"), {}};
        for (const auto& d : mut.at("data")) s.data.push_back({d.get<std::string>(), std::nullopt});
        m.evidence_sources.push_back(std::move(s));
        return true;
    }
    if (op == "add_association") {
        EvidenceAssociation a;
        a.id = mut.at("association");
        a.kind = mut.at("kind") == "dependence" ? AssociationKind::Dependence : AssociationKind::Hardening;
        a.from_data_ref = mut.at("from");
        a.to_data_ref = mut.at("to");
        if (mut.contains("measure")) a.measure = HardeningMeasure::Protection;
        m.evidence_associations.push_back(std::move(a));
        return true;
    }
    return false;
}

/// Rule ids present after a mutation that were not present before.
inline std::set<std::string> new_rule_ids(const std::vector<Finding>& before, const std::vector<Finding>& after) {
    std::multiset<std::string> old;
    for (const auto& f : before) old.insert(f.rule_id);
    std::set<std::string> out;
    std::multiset<std::string> seen;
    for (const auto& f : after) {
        seen.insert(f.rule_id);
        if (seen.count(f.rule_id) > old.count(f.rule_id)) out.insert(f.rule_id);
    }
    return out;
}

// ---- brute-force run enumeration ------------------------------------------

/// Token game written directly over the model, independent of FlowGraph.
/// Places are flow ids; a non-AND node with several marked inputs may consume
/// any one of them, each choice explored.
class RunEnumerator {
public:
    explicit RunEnumerator(const ProcessModel& model) {
        for (const auto& pool : model.pools) {
            for (const auto& n : pool.nodes) {
                nodes_.push_back(n.id);
                kind_[n.id] = n.kind;
            }
            for (const auto& f : pool.sequence_flows) {
                seq_out_[f.source_ref].push_back(f.id);
                seq_in_[f.target_ref].push_back(f.id);
            }
        }
        for (const auto& f : model.message_flows) {
            msg_out_[f.source_ref].push_back(f.id);
            msg_in_[f.target_ref].push_back(f.id);
        }
    }

    /// Calls `visit` once per maximal run of at most `max_steps` firings, with
    /// the fired node ids in order. Returns false if some run was cut off.
    bool enumerate(std::size_t max_steps, const std::function<void(const std::vector<std::string>&)>& visit) const {
        State s;
        std::vector<std::string> run;
        bool complete = true;
        explore(s, run, max_steps, visit, complete);
        return complete;
    }

private:
    struct State {
        std::map<std::string, int> tokens;
        std::set<std::string> started;
    };

    static std::vector<std::string> marked(const State& s, const std::vector<std::string>& places) {
        std::vector<std::string> out;
        for (const auto& p : places) {
            auto it = s.tokens.find(p);
            if (it != s.tokens.end() && it->second > 0) out.push_back(p);
        }
        return out;
    }

    const std::vector<std::string>& list(const std::map<std::string, std::vector<std::string>>& m,
                                         const std::string& k) const {
        static const std::vector<std::string> empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }

    // All successor states of firing `v`, one per consumption and branch choice.
    std::vector<State> successors(const State& s, const std::string& v) const {
        const auto& sin = list(seq_in_, v);
        const auto& min = list(msg_in_, v);
        const auto& sout = list(seq_out_, v);
        const auto& mout = list(msg_out_, v);
        NodeKind k = kind_.at(v);

        std::vector<State> consumed;
        if (k == NodeKind::StartEvent) {
            if (min.empty()) {
                if (s.started.count(v)) return {};
                State t = s;
                t.started.insert(v);
                consumed.push_back(t);
            } else {
                for (const auto& p : marked(s, min)) {
                    State t = s;
                    --t.tokens[p];
                    consumed.push_back(t);
                }
            }
        } else {
            if (sin.empty()) return {};
            std::vector<State> after_seq;
            if (k == NodeKind::AndGateway) {
                if (marked(s, sin).size() != sin.size()) return {};
                State t = s;
                for (const auto& p : sin) --t.tokens[p];
                after_seq.push_back(t);
            } else {
                for (const auto& p : marked(s, sin)) {
                    State t = s;
                    --t.tokens[p];
                    after_seq.push_back(t);
                }
            }
            for (const auto& t : after_seq) {
                if (min.empty()) {
                    consumed.push_back(t);
                    continue;
                }
                for (const auto& p : marked(t, min)) {
                    State u = t;
                    --u.tokens[p];
                    consumed.push_back(u);
                }
            }
        }

        std::vector<State> out;
        for (const auto& t : consumed) {
            if (k == NodeKind::XorGateway && sout.size() > 1) {
                for (const auto& p : sout) {
                    State u = t;
                    ++u.tokens[p];
                    for (const auto& q : mout) ++u.tokens[q];
                    out.push_back(u);
                }
            } else {
                State u = t;
                for (const auto& p : sout) ++u.tokens[p];
                for (const auto& q : mout) ++u.tokens[q];
                out.push_back(u);
            }
        }
        return out;
    }

    void explore(const State& s, std::vector<std::string>& run, std::size_t max_steps,
                 const std::function<void(const std::vector<std::string>&)>& visit, bool& complete) const {
        bool any = false;
        for (const auto& v : nodes_) {
            auto next = successors(s, v);
            if (next.empty()) continue;
            any = true;
            if (run.size() >= max_steps) {
                complete = false;
                return;
            }
            run.push_back(v);
            for (const auto& n : next) explore(n, run, max_steps, visit, complete);
            run.pop_back();
        }
        if (!any) visit(run);
    }

    std::vector<std::string> nodes_;
    std::map<std::string, NodeKind> kind_;
    std::map<std::string, std::vector<std::string>> seq_in_, seq_out_, msg_in_, msg_out_;
};

/// Oracle for must_precede: every firing of a B node is a firing of an A node
/// or comes after one, in every maximal run.
inline PrecedenceVerdict oracle_precedence(const ProcessModel& model, const std::set<std::string>& a,
                                           const std::set<std::string>& b) {
    if (!FlowGraph(model).is_acyclic()) return PrecedenceVerdict::Unverified;
    bool ok = true;
    std::size_t nodes = 0;
    for (const auto& p : model.pools) nodes += p.nodes.size();
    RunEnumerator(model).enumerate(4 * nodes + 4, [&](const std::vector<std::string>& run) {
        bool seen_a = false;
        for (const auto& v : run) {
            if (a.count(v)) seen_a = true;
            else if (b.count(v) && !seen_a) ok = false;
        }
    });
    return ok ? PrecedenceVerdict::Guaranteed : PrecedenceVerdict::NotGuaranteed;
}

/// Oracle language: the (source, data) words of all maximal runs within the
/// bound, for models where each evidence source lists its data in emission order.
inline std::set<std::vector<EvidenceKey>> oracle_language(const ProcessModel& model, std::size_t bound) {
    ModelIndex index(model);
    std::map<std::string, std::vector<EvidenceKey>> emits;
    for (const auto& s : model.evidence_sources)
        for (const auto& v : source_emitters(index, s))
            for (const auto& d : s.data) emits[v].emplace_back(s.id, d.data_ref);
    std::set<std::vector<EvidenceKey>> words;
    RunEnumerator(model).enumerate(bound, [&](const std::vector<std::string>& run) {
        std::vector<EvidenceKey> w;
        for (const auto& v : run)
            if (auto it = emits.find(v); it != emits.end()) w.insert(w.end(), it->second.begin(), it->second.end());
        words.insert(std::move(w));
    });
    return words;
}

// ---- random block-structured workflows ------------------------------------

struct RandomWorkflow {
    ProcessModel model;
    std::vector<std::string> tasks;
};

namespace detail {

class WorkflowBuilder {
public:
    WorkflowBuilder(std::mt19937_64& rng, Pool& pool, std::string prefix)
        : rng_(rng), pool_(pool), prefix_(std::move(prefix)) {}

    std::string add_node(NodeKind k, const std::string& stem) {
        std::string id = prefix_ + stem + std::to_string(pool_.nodes.size());
        pool_.nodes.push_back({id, k, id});
        return id;
    }

    void link(const std::string& from, const std::string& to) {
        pool_.sequence_flows.push_back(
            {prefix_ + "f" + std::to_string(pool_.sequence_flows.size()), "", from, to});
    }

    /// Builds a block using at most `budget` nodes, returns (entry, exit).
    /// An empty pair means the block is empty (a direct edge).
    std::pair<std::string, std::string> block(int budget, std::vector<std::string>& tasks) {
        if (budget <= 0) return {};
        int pick = static_cast<int>(rng_() % 10);
        if (budget >= 4 && pick < 4) {
            NodeKind k = pick < 2 ? NodeKind::XorGateway : NodeKind::AndGateway;
            std::string split = add_node(k, k == NodeKind::XorGateway ? "x" : "a");
            int inner = budget - 2;
            int branches = 2 + (inner >= 3 && rng_() % 3 == 0 ? 1 : 0);
            std::vector<std::pair<std::string, std::string>> parts;
            for (int i = 0; i < branches; ++i) {
                int share = inner / (branches - i);
                int use = share > 0 ? static_cast<int>(rng_() % (share + 1)) : 0;
                if (k == NodeKind::AndGateway && use == 0 && share > 0) use = 1;
                inner -= use;
                parts.push_back(block(use, tasks));
            }
            std::string join = add_node(k, k == NodeKind::XorGateway ? "xj" : "aj");
            for (const auto& [in, out] : parts) {
                if (in.empty()) {
                    link(split, join);
                } else {
                    link(split, in);
                    link(out, join);
                }
            }
            return {split, join};
        }
        if (budget >= 2 && pick < 7) {
            int first = 1 + static_cast<int>(rng_() % static_cast<unsigned>(budget - 1));
            auto a = block(first, tasks);
            auto b = block(budget - first, tasks);
            if (a.first.empty()) return b;
            if (b.first.empty()) return a;
            link(a.second, b.first);
            return {a.first, b.second};
        }
        std::string t = add_node(NodeKind::Task, "t");
        tasks.push_back(t);
        return {t, t};
    }

private:
    std::mt19937_64& rng_;
    Pool& pool_;
    std::string prefix_;
};

}  // namespace detail

/// Random acyclic, block-structured workflow with at most `max_nodes` nodes.
/// About a third of the models get a second pool started by a message thrown
/// from a task of the first pool.
inline RandomWorkflow random_workflow(std::uint64_t seed, int max_nodes = 10) {
    std::mt19937_64 rng(seed);
    RandomWorkflow w;
    w.model.id = "random" + std::to_string(seed);
    bool two_pools = max_nodes >= 8 && rng() % 3 == 0;

    auto build_pool = [&](const std::string& prefix, int budget) {
        Pool pool;
        pool.id = prefix + "pool";
        pool.process_id = prefix + "process";
        detail::WorkflowBuilder b(rng, pool, prefix);
        std::string start = b.add_node(NodeKind::StartEvent, "s");
        auto body = b.block(budget - 2, w.tasks);
        std::string end = b.add_node(NodeKind::EndEvent, "e");
        if (body.first.empty()) {
            b.link(start, end);
        } else {
            b.link(start, body.first);
            b.link(body.second, end);
        }
        w.model.pools.push_back(std::move(pool));
        return start;
    };

    if (!two_pools) {
        build_pool("p_", max_nodes);
        return w;
    }
    int first = 4 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes - 7));
    build_pool("p_", first);
    std::vector<std::string> first_tasks = w.tasks;
    std::string second_start = build_pool("q_", max_nodes - first);
    if (!first_tasks.empty()) {
        const std::string& sender = first_tasks[rng() % first_tasks.size()];
        w.model.message_flows.push_back({"m_0", "", sender, second_start});
    }
    return w;
}

/// Random non-empty subset of `from`.
inline std::set<std::string> random_subset(std::mt19937_64& rng, const std::vector<std::string>& from,
                                           std::size_t max_size = 2) {
    std::set<std::string> out;
    if (from.empty()) return out;
    std::size_t n = 1 + rng() % std::min(max_size, from.size());
    while (out.size() < n) out.insert(from[rng() % from.size()]);
    return out;
}

}  // namespace frbpmn::testing
