#pragma once

// In-memory representation of BPMN process models annotated with
// forensic-ready evidence constructs, plus the basic queries over them.
//
// A ProcessModel is a plain value. Queries that need id lookup build a
// ModelIndex, which holds non-owning pointers into the model and must not
// outlive it.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "frbpmn/error.hpp"

namespace frbpmn {

enum class NodeKind { StartEvent, EndEvent, Task, XorGateway, AndGateway, MessageCatch, MessageThrow };

struct FlowNode {
    std::string id;
    NodeKind kind = NodeKind::Task;
    std::string name;

    bool operator==(const FlowNode&) const = default;
};

struct SequenceFlow {
    std::string id;
    std::string name;
    std::string source_ref;
    std::string target_ref;

    bool operator==(const SequenceFlow&) const = default;
};

struct DataObject {
    std::string id;
    std::string name;
    bool persistent = false;
    std::vector<std::string> readers;  // flow node ids, model order
    std::vector<std::string> writers;  // flow node ids, model order

    bool operator==(const DataObject&) const = default;
};

struct DataStore {
    std::string id;
    std::string name;
    std::vector<std::string> readers;
    std::vector<std::string> writers;

    static constexpr bool persistent() noexcept { return true; }
    bool operator==(const DataStore&) const = default;
};

struct Pool {
    std::string id;
    std::string name;
    std::string process_id;
    std::vector<FlowNode> nodes;
    std::vector<SequenceFlow> sequence_flows;
    std::vector<DataObject> data_objects;
    std::vector<DataStore> data_stores;

    bool operator==(const Pool&) const = default;
};

struct MessageFlow {
    std::string id;
    std::string name;
    std::string source_ref;
    std::string target_ref;

    bool operator==(const MessageFlow&) const = default;
};

/// Free-text description of one type of potential evidence and its storage.
struct EvidenceMeta {
    std::string content;
    std::string format;
    std::string storage_location;
    std::string access_control;
    std::string retention;

    bool operator==(const EvidenceMeta&) const = default;
};

struct EvidenceData {
    std::string data_ref;
    std::optional<EvidenceMeta> meta;

    bool operator==(const EvidenceData&) const = default;
};

/// The potential evidence source: a host element (flow node or data store)
/// together with the data object types it produces.
struct EvidenceSource {
    std::string id;
    std::string host_ref;
    std::vector<EvidenceData> data;

    bool operator==(const EvidenceSource&) const = default;
};

enum class AssociationKind { Dependence, Hardening };
enum class HardeningMeasure { Precision, Protection, Enhancement };

/// Dependence: in a nominal run, evidence `from` occurs before evidence `to`.
/// Hardening: evidence `from` is a proof strengthening evidence `to`.
struct EvidenceAssociation {
    std::string id;
    AssociationKind kind = AssociationKind::Dependence;
    std::string from_data_ref;
    std::string to_data_ref;
    std::optional<HardeningMeasure> measure;

    bool operator==(const EvidenceAssociation&) const = default;
};

enum class AnnotationKind { Asset, Threat, Vulnerability, RiskTreatment };

/// Opaque security-risk tag attached to any model element.
struct SecurityAnnotation {
    std::string id;
    std::string element_ref;
    AnnotationKind kind = AnnotationKind::Asset;
    std::string label;

    bool operator==(const SecurityAnnotation&) const = default;
};

struct ProcessModel {
    std::string id;
    std::string collaboration_id;
    std::vector<Pool> pools;
    std::vector<MessageFlow> message_flows;
    std::vector<EvidenceSource> evidence_sources;
    std::vector<EvidenceAssociation> evidence_associations;
    std::vector<SecurityAnnotation> security_annotations;

    bool operator==(const ProcessModel&) const = default;
};

enum class ElementKind {
    Model,
    Collaboration,
    Pool,
    Process,
    FlowNode,
    SequenceFlow,
    MessageFlow,
    DataObject,
    DataStore,
    EvidenceSource,
    EvidenceAssociation,
    SecurityAnnotation,
};

inline std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::StartEvent: return "StartEvent";
        case NodeKind::EndEvent: return "EndEvent";
        case NodeKind::Task: return "Task";
        case NodeKind::XorGateway: return "XorGateway";
        case NodeKind::AndGateway: return "AndGateway";
        case NodeKind::MessageCatch: return "MessageCatch";
        case NodeKind::MessageThrow: return "MessageThrow";
    }
    return "?";
}

inline std::string_view to_string(AssociationKind k) {
    return k == AssociationKind::Dependence ? "dependence" : "hardening";
}

inline std::string_view to_string(HardeningMeasure m) {
    switch (m) {
        case HardeningMeasure::Precision: return "precision";
        case HardeningMeasure::Protection: return "protection";
        case HardeningMeasure::Enhancement: return "enhancement";
    }
    return "?";
}

inline std::string_view to_string(AnnotationKind k) {
    switch (k) {
        case AnnotationKind::Asset: return "asset";
        case AnnotationKind::Threat: return "threat";
        case AnnotationKind::Vulnerability: return "vulnerability";
        case AnnotationKind::RiskTreatment: return "riskTreatment";
    }
    return "?";
}

/// Id lookup over a model. Tolerates duplicate ids (first occurrence wins) so
/// that it can also be used on hand-mutated models.
class ModelIndex {
public:
    struct Entry {
        ElementKind kind;
        const void* element;
        std::size_t pool;  // owning pool for pool-scoped elements, npos otherwise
    };

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ModelIndex(const ProcessModel& model) : model_(&model) {
        add(model.id, ElementKind::Model, &model, npos);
        add(model.collaboration_id, ElementKind::Collaboration, &model, npos);
        for (std::size_t p = 0; p < model.pools.size(); ++p) {
            const Pool& pool = model.pools[p];
            add(pool.id, ElementKind::Pool, &pool, p);
            add(pool.process_id, ElementKind::Process, &pool, p);
            for (const auto& n : pool.nodes) {
                add(n.id, ElementKind::FlowNode, &n, p);
                node_order_.emplace(n.id, node_order_.size());
            }
            for (const auto& f : pool.sequence_flows) add(f.id, ElementKind::SequenceFlow, &f, p);
            for (const auto& d : pool.data_objects) add(d.id, ElementKind::DataObject, &d, p);
            for (const auto& s : pool.data_stores) add(s.id, ElementKind::DataStore, &s, p);
        }
        for (const auto& m : model.message_flows) add(m.id, ElementKind::MessageFlow, &m, npos);
        for (const auto& s : model.evidence_sources) add(s.id, ElementKind::EvidenceSource, &s, npos);
        for (const auto& a : model.evidence_associations)
            add(a.id, ElementKind::EvidenceAssociation, &a, npos);
        for (const auto& a : model.security_annotations)
            add(a.id, ElementKind::SecurityAnnotation, &a, npos);
    }

    const ProcessModel& model() const noexcept { return *model_; }

    const Entry* find(std::string_view id) const {
        auto it = entries_.find(std::string(id));
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool contains(std::string_view id) const { return find(id) != nullptr; }

    std::optional<ElementKind> kind_of(std::string_view id) const {
        const Entry* e = find(id);
        if (!e) return std::nullopt;
        return e->kind;
    }

    const FlowNode* node(std::string_view id) const { return get<FlowNode>(id, ElementKind::FlowNode); }
    const DataObject* data_object(std::string_view id) const {
        return get<DataObject>(id, ElementKind::DataObject);
    }
    const DataStore* data_store(std::string_view id) const {
        return get<DataStore>(id, ElementKind::DataStore);
    }
    const EvidenceSource* evidence_source(std::string_view id) const {
        return get<EvidenceSource>(id, ElementKind::EvidenceSource);
    }

    /// Pool owning a pool-scoped element, or nullptr.
    const Pool* pool_of(std::string_view id) const {
        const Entry* e = find(id);
        if (!e || e->pool == npos) return nullptr;
        return &model_->pools[e->pool];
    }

    /// Position of a flow node in model order (pool order, then document order).
    std::optional<std::size_t> node_position(std::string_view id) const {
        auto it = node_order_.find(std::string(id));
        if (it == node_order_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t node_count() const noexcept { return node_order_.size(); }

private:
    void add(const std::string& id, ElementKind kind, const void* element, std::size_t pool) {
        if (id.empty()) return;
        entries_.emplace(id, Entry{kind, element, pool});
    }

    template <class T>
    const T* get(std::string_view id, ElementKind kind) const {
        const Entry* e = find(id);
        if (!e || e->kind != kind) return nullptr;
        return static_cast<const T*>(e->element);
    }

    const ProcessModel* model_;
    std::unordered_map<std::string, Entry> entries_;
    std::unordered_map<std::string, std::size_t> node_order_;
};

/// One (evidence source, data object) pair: a refined forensic-ready requirement.
struct EvidenceContext {
    const EvidenceSource* source;
    const DataObject* data;
};

/// Every (source, data object) pair in model order. Data refs that do not
/// resolve to a data object are skipped; sources without data contribute nothing.
inline std::vector<EvidenceContext> evidence_contexts(const ProcessModel& model) {
    ModelIndex index(model);
    std::vector<EvidenceContext> out;
    for (const auto& source : model.evidence_sources) {
        for (const auto& entry : source.data) {
            if (const DataObject* d = index.data_object(entry.data_ref)) out.push_back({&source, d});
        }
    }
    return out;
}

namespace detail {

inline void sort_by_model_order(std::vector<std::string>& nodes, const ModelIndex& index) {
    std::sort(nodes.begin(), nodes.end(), [&](const std::string& a, const std::string& b) {
        return index.node_position(a).value_or(ModelIndex::npos) <
               index.node_position(b).value_or(ModelIndex::npos);
    });
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

}  // namespace detail

/// Flow nodes whose execution makes `source` emit evidence records: the host
/// itself for a flow-node host, every writer of the store for a store host,
/// nothing for any other host.
inline std::vector<std::string> source_emitters(const ModelIndex& index, const EvidenceSource& source) {
    std::vector<std::string> out;
    if (index.node(source.host_ref)) {
        out.push_back(source.host_ref);
    } else if (const DataStore* store = index.data_store(source.host_ref)) {
        for (const auto& w : store->writers)
            if (index.node(w)) out.push_back(w);
    }
    detail::sort_by_model_order(out, index);
    return out;
}

/// Flow nodes whose execution emits a record of data object `data_id` through
/// any evidence source.
inline std::vector<std::string> evidence_emitters(const ModelIndex& index, std::string_view data_id) {
    std::vector<std::string> out;
    for (const auto& source : index.model().evidence_sources) {
        bool hosts = std::any_of(source.data.begin(), source.data.end(),
                                 [&](const EvidenceData& d) { return d.data_ref == data_id; });
        if (!hosts) continue;
        auto e = source_emitters(index, source);
        out.insert(out.end(), e.begin(), e.end());
    }
    detail::sort_by_model_order(out, index);
    return out;
}

/// Flow nodes producing `data_id`: its direct writers, plus the writers of
/// every data store hosting an evidence source that lists the data object.
/// Result is in model order.
inline std::vector<std::string> producers_of(const ProcessModel& model, std::string_view data_id) {
    ModelIndex index(model);
    const DataObject* data = index.data_object(data_id);
    if (!data) throw ReferenceError({std::string(data_id)});
    std::vector<std::string> out;
    for (const auto& w : data->writers)
        if (index.node(w)) out.push_back(w);
    for (const auto& source : model.evidence_sources) {
        const DataStore* store = index.data_store(source.host_ref);
        if (!store) continue;
        bool lists = std::any_of(source.data.begin(), source.data.end(),
                                 [&](const EvidenceData& d) { return d.data_ref == data_id; });
        if (!lists) continue;
        for (const auto& w : store->writers)
            if (index.node(w)) out.push_back(w);
    }
    detail::sort_by_model_order(out, index);
    return out;
}

}  // namespace frbpmn
