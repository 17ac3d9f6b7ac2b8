#pragma once

// Flattened flow graph over all pools (sequence flows and message flows as
// token places) and the token-game firing rule shared by the simulator and
// the conformance checker.
//
// Firing rule:
//  - a plain start event (no incoming message flow) fires once per instance;
//  - a message start event fires once per token on any incoming message flow;
//  - an AND gateway needs a token on every incoming sequence flow;
//  - any other node needs a token on one incoming sequence flow and, when it
//    has incoming message flows, a token on one of them;
//  - an XOR gateway puts a token on exactly one outgoing sequence flow, every
//    other node on all of them; every node sends on all outgoing message flows.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "frbpmn/model.hpp"

namespace frbpmn {

class FlowGraph {
public:
    explicit FlowGraph(const ProcessModel& model) {
        ModelIndex index(model);
        for (const auto& pool : model.pools) {
            for (const auto& n : pool.nodes) {
                node_index_.emplace(n.id, node_ids_.size());
                node_ids_.push_back(n.id);
                kinds_.push_back(n.kind);
            }
        }
        const std::size_t n = node_ids_.size();
        seq_in_.resize(n);
        seq_out_.resize(n);
        msg_in_.resize(n);
        msg_out_.resize(n);
        for (const auto& pool : model.pools)
            for (const auto& f : pool.sequence_flows) add_place(f.id, f.source_ref, f.target_ref, false);
        for (const auto& m : model.message_flows) add_place(m.id, m.source_ref, m.target_ref, true);
    }

    std::size_t node_count() const noexcept { return node_ids_.size(); }
    std::size_t place_count() const noexcept { return place_ids_.size(); }

    const std::string& node_id(std::size_t v) const { return node_ids_[v]; }
    NodeKind kind(std::size_t v) const { return kinds_[v]; }
    const std::string& place_id(std::size_t p) const { return place_ids_[p]; }
    std::size_t place_source(std::size_t p) const { return place_src_[p]; }
    std::size_t place_target(std::size_t p) const { return place_dst_[p]; }
    bool is_message_place(std::size_t p) const { return place_msg_[p]; }

    const std::vector<std::size_t>& seq_in(std::size_t v) const { return seq_in_[v]; }
    const std::vector<std::size_t>& seq_out(std::size_t v) const { return seq_out_[v]; }
    const std::vector<std::size_t>& msg_in(std::size_t v) const { return msg_in_[v]; }
    const std::vector<std::size_t>& msg_out(std::size_t v) const { return msg_out_[v]; }

    std::optional<std::size_t> node(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> place(const std::string& id) const {
        auto it = place_index_.find(id);
        if (it == place_index_.end()) return std::nullopt;
        return it->second;
    }

    bool is_plain_start(std::size_t v) const {
        return kinds_[v] == NodeKind::StartEvent && msg_in_[v].empty();
    }

    /// Kahn order over sequence and message edges; nullopt when cyclic.
    std::optional<std::vector<std::size_t>> topological_order() const {
        std::vector<std::size_t> indegree(node_count(), 0);
        for (std::size_t p = 0; p < place_count(); ++p) ++indegree[place_dst_[p]];
        std::vector<std::size_t> ready;
        for (std::size_t v = node_count(); v-- > 0;)
            if (indegree[v] == 0) ready.push_back(v);
        std::vector<std::size_t> order;
        order.reserve(node_count());
        while (!ready.empty()) {
            std::size_t v = ready.back();
            ready.pop_back();
            order.push_back(v);
            auto relax = [&](const std::vector<std::size_t>& outs) {
                for (std::size_t p : outs)
                    if (--indegree[place_dst_[p]] == 0) ready.push_back(place_dst_[p]);
            };
            relax(seq_out_[v]);
            relax(msg_out_[v]);
        }
        if (order.size() != node_count()) return std::nullopt;
        return order;
    }

    bool is_acyclic() const { return topological_order().has_value(); }

    /// Token counts per place plus the fired flag of plain start events.
    struct Marking {
        std::vector<std::uint16_t> tokens;
        std::vector<std::uint8_t> started;

        bool operator==(const Marking&) const = default;

        std::string key() const {
            std::string k;
            k.reserve(tokens.size() * 2 + started.size());
            for (auto t : tokens) {
                k.push_back(static_cast<char>(t & 0xff));
                k.push_back(static_cast<char>(t >> 8));
            }
            for (auto s : started) k.push_back(static_cast<char>(s));
            return k;
        }
    };

    /// Empty marking. With `auto_start` false, plain start events are treated
    /// as already fired, so only injected tokens can drive the instance.
    Marking initial_marking(bool auto_start = true) const {
        Marking m;
        m.tokens.assign(place_count(), 0);
        m.started.assign(node_count(), auto_start ? 0 : 1);
        return m;
    }

    bool enabled(const Marking& m, std::size_t v) const {
        if (kinds_[v] == NodeKind::StartEvent) {
            if (msg_in_[v].empty()) return !m.started[v];
            return any_marked(m, msg_in_[v]);
        }
        const auto& in = seq_in_[v];
        if (in.empty()) return false;
        bool seq_ok = kinds_[v] == NodeKind::AndGateway ? all_marked(m, in) : any_marked(m, in);
        if (!seq_ok) return false;
        return msg_in_[v].empty() || any_marked(m, msg_in_[v]);
    }

    std::vector<std::size_t> enabled_nodes(const Marking& m) const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < node_count(); ++v)
            if (enabled(m, v)) out.push_back(v);
        return out;
    }

    /// Number of distinct firing outcomes (outgoing branch choices) of `v`.
    std::size_t choices(std::size_t v) const {
        if (kinds_[v] == NodeKind::XorGateway && seq_out_[v].size() > 1) return seq_out_[v].size();
        return 1;
    }

    /// Fires enabled node `v`; `choice` selects the XOR branch.
    void fire(Marking& m, std::size_t v, std::size_t choice = 0) const {
        if (kinds_[v] == NodeKind::StartEvent) {
            if (msg_in_[v].empty())
                m.started[v] = 1;
            else
                consume_one(m, msg_in_[v]);
        } else {
            if (kinds_[v] == NodeKind::AndGateway) {
                for (std::size_t p : seq_in_[v]) --m.tokens[p];
            } else {
                consume_one(m, seq_in_[v]);
            }
            if (!msg_in_[v].empty()) consume_one(m, msg_in_[v]);
        }
        const auto& out = seq_out_[v];
        if (kinds_[v] == NodeKind::XorGateway && !out.empty()) {
            ++m.tokens[out[choice % out.size()]];
        } else {
            for (std::size_t p : out) ++m.tokens[p];
        }
        for (std::size_t p : msg_out_[v]) ++m.tokens[p];
    }

private:
    void add_place(const std::string& id, const std::string& src, const std::string& dst, bool message) {
        auto s = node(src);
        auto d = node(dst);
        if (!s || !d) return;
        std::size_t p = place_ids_.size();
        place_index_.emplace(id, p);
        place_ids_.push_back(id);
        place_src_.push_back(*s);
        place_dst_.push_back(*d);
        place_msg_.push_back(message);
        (message ? msg_out_ : seq_out_)[*s].push_back(p);
        (message ? msg_in_ : seq_in_)[*d].push_back(p);
    }

    static bool any_marked(const Marking& m, const std::vector<std::size_t>& places) {
        for (std::size_t p : places)
            if (m.tokens[p] > 0) return true;
        return false;
    }

    static bool all_marked(const Marking& m, const std::vector<std::size_t>& places) {
        for (std::size_t p : places)
            if (m.tokens[p] == 0) return false;
        return true;
    }

    static void consume_one(Marking& m, const std::vector<std::size_t>& places) {
        for (std::size_t p : places) {
            if (m.tokens[p] > 0) {
                --m.tokens[p];
                return;
            }
        }
    }

    std::vector<std::string> node_ids_;
    std::vector<NodeKind> kinds_;
    std::unordered_map<std::string, std::size_t> node_index_;
    std::vector<std::string> place_ids_;
    std::vector<std::size_t> place_src_;
    std::vector<std::size_t> place_dst_;
    std::vector<bool> place_msg_;
    std::unordered_map<std::string, std::size_t> place_index_;
    std::vector<std::vector<std::size_t>> seq_in_, seq_out_, msg_in_, msg_out_;
};

}  // namespace frbpmn
