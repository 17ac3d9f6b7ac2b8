#pragma once

// BPMN 2.0 XML subset with the forensic-ready extension namespaces.
//
// Supported BPMN elements: definitions, collaboration, participant,
// messageFlow, process, startEvent, endEvent, task, exclusiveGateway,
// parallelGateway, intermediateCatchEvent, intermediateThrowEvent,
// sequenceFlow, dataObject, dataStoreReference, association,
// dataInputAssociation, dataOutputAssociation. Documentation, lanes, message
// definitions and diagram interchange are accepted and dropped. Anything else
// in the BPMN namespace is rejected.
//
// Extension elements (inside any bpmn:extensionElements):
//
//   <ev:evidenceSource id=".." hostRef="..">
//     <ev:evidenceData dataRef=".." content=".." format=".." storageLocation=".."
//                      accessControl=".." retention=".."/>
//   </ev:evidenceSource>
//   <ev:evidenceAssociation id=".." kind="dependence|hardening" sourceRef=".."
//                           targetRef=".." measure="precision|protection|enhancement"/>
//   <risk:securityAnnotation id=".." elementRef=".." kind="asset|threat|vulnerability|riskTreatment"
//                            label=".."/>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "frbpmn/error.hpp"
#include "frbpmn/model.hpp"
#include "frbpmn/xml.hpp"

namespace frbpmn {

inline constexpr std::string_view kBpmnNamespace = "http://www.omg.org/spec/BPMN/20100524/MODEL";
inline constexpr std::string_view kEvidenceNamespace = "https://frbpmn.dev/schema/evidence/1.0";
inline constexpr std::string_view kRiskNamespace = "https://frbpmn.dev/schema/risk/1.0";
inline constexpr std::string_view kModelsNamespace = "https://frbpmn.dev/models";

namespace detail {

inline bool is_diagram_namespace(std::string_view ns) {
    return ns == "http://www.omg.org/spec/BPMN/20100524/DI" ||
           ns == "http://www.omg.org/spec/DD/20100524/DC" ||
           ns == "http://www.omg.org/spec/DD/20100524/DI";
}

inline std::string qualified(const xml::Element& e) {
    if (e.ns == kBpmnNamespace) return "bpmn:" + e.local;
    if (e.ns == kEvidenceNamespace) return "ev:" + e.local;
    if (e.ns == kRiskNamespace) return "risk:" + e.local;
    return e.ns.empty() ? e.local : "{" + e.ns + "}" + e.local;
}

inline std::string where(const xml::Element& e) {
    return " (line " + std::to_string(e.line) + ")";
}

inline const std::string& required(const xml::Element& e, std::string_view attr) {
    const std::string* v = e.attribute(attr);
    if (!v || v->empty())
        throw SchemaError(qualified(e) + " is missing attribute '" + std::string(attr) + "'" + where(e));
    return *v;
}

inline bool is_bpmn(const xml::Element& e, std::string_view local) {
    return e.ns == kBpmnNamespace && e.local == local;
}

struct RawDataAssociation {
    std::string node;
    std::string data;
    bool write;
};

struct RawUndirected {
    std::string id;
    std::string source;
    std::string target;
    std::size_t line;
};

struct RawProcess {
    std::string id;
    std::string name;
    Pool pool;
    std::vector<RawDataAssociation> data_associations;
    std::vector<RawUndirected> undirected;
};

class BpmnReader {
public:
    ProcessModel read(const xml::Element& root) {
        if (!is_bpmn(root, "definitions")) throw UnsupportedConstructError(qualified(root));
        model_.id = required(root, "id");
        for (const auto& child : root.children) {
            if (is_diagram_namespace(child.ns)) continue;
            if (child.ns != kBpmnNamespace) throw UnsupportedConstructError(qualified(child));
            if (child.local == "collaboration") {
                read_collaboration(child);
            } else if (child.local == "process") {
                read_process(child);
            } else if (child.local == "extensionElements") {
                read_extensions(child);
            } else if (child.local == "documentation" || child.local == "message") {
                continue;
            } else {
                throw UnsupportedConstructError(qualified(child));
            }
        }
        assemble_pools();
        resolve();
        return std::move(model_);
    }

private:
    void read_collaboration(const xml::Element& e) {
        if (!model_.collaboration_id.empty())
            throw SchemaError("more than one bpmn:collaboration" + where(e));
        model_.collaboration_id = required(e, "id");
        for (const auto& c : e.children) {
            if (c.ns != kBpmnNamespace) throw UnsupportedConstructError(qualified(c));
            if (c.local == "participant") {
                participants_.push_back({required(c, "id"), c.attribute_or("name"), c.attribute_or("processRef")});
            } else if (c.local == "messageFlow") {
                model_.message_flows.push_back(
                    {required(c, "id"), c.attribute_or("name"), required(c, "sourceRef"), required(c, "targetRef")});
            } else if (c.local == "extensionElements") {
                read_extensions(c);
            } else if (c.local == "documentation") {
                continue;
            } else {
                throw UnsupportedConstructError(qualified(c));
            }
        }
    }

    static std::optional<NodeKind> node_kind(std::string_view local) {
        if (local == "startEvent") return NodeKind::StartEvent;
        if (local == "endEvent") return NodeKind::EndEvent;
        if (local == "task") return NodeKind::Task;
        if (local == "exclusiveGateway") return NodeKind::XorGateway;
        if (local == "parallelGateway") return NodeKind::AndGateway;
        if (local == "intermediateCatchEvent") return NodeKind::MessageCatch;
        if (local == "intermediateThrowEvent") return NodeKind::MessageThrow;
        return std::nullopt;
    }

    void read_process(const xml::Element& e) {
        RawProcess proc;
        proc.id = required(e, "id");
        proc.name = e.attribute_or("name");
        for (const auto& c : e.children) {
            ++position_;
            if (c.ns != kBpmnNamespace) throw UnsupportedConstructError(qualified(c));
            if (auto kind = node_kind(c.local)) {
                FlowNode node{required(c, "id"), *kind, c.attribute_or("name")};
                positions_[node.id] = position_;
                read_node_children(c, node, proc);
                proc.pool.nodes.push_back(std::move(node));
            } else if (c.local == "sequenceFlow") {
                for (const auto& g : c.children)
                    if (!(g.ns == kBpmnNamespace &&
                          (g.local == "conditionExpression" || g.local == "documentation" ||
                           g.local == "extensionElements")))
                        throw UnsupportedConstructError(qualified(g));
                    else if (g.local == "extensionElements")
                        read_extensions(g);
                proc.pool.sequence_flows.push_back(
                    {required(c, "id"), c.attribute_or("name"), required(c, "sourceRef"), required(c, "targetRef")});
            } else if (c.local == "dataObject") {
                DataObject d{required(c, "id"), c.attribute_or("name"), false, {}, {}};
                std::string persistent =
                    c.attribute_or(std::string(kEvidenceNamespace) + xml::detail::kSep + "persistent", "false");
                if (persistent != "true" && persistent != "false")
                    throw SchemaError("ev:persistent must be true or false" + where(c));
                d.persistent = persistent == "true";
                positions_[d.id] = position_;
                proc.pool.data_objects.push_back(std::move(d));
            } else if (c.local == "dataStoreReference") {
                DataStore s{required(c, "id"), c.attribute_or("name"), {}, {}};
                positions_[s.id] = position_;
                proc.pool.data_stores.push_back(std::move(s));
            } else if (c.local == "association") {
                proc.undirected.push_back(
                    {required(c, "id"), required(c, "sourceRef"), required(c, "targetRef"), c.line});
            } else if (c.local == "extensionElements") {
                read_extensions(c);
            } else if (c.local == "documentation" || c.local == "laneSet") {
                continue;
            } else {
                throw UnsupportedConstructError(qualified(c));
            }
        }
        processes_.push_back(std::move(proc));
    }

    void read_node_children(const xml::Element& e, const FlowNode& node, RawProcess& proc) {
        for (const auto& c : e.children) {
            if (c.ns != kBpmnNamespace) throw UnsupportedConstructError(qualified(c));
            if (c.local == "incoming" || c.local == "outgoing" || c.local == "documentation") continue;
            if (c.local == "messageEventDefinition") {
                if (node.kind != NodeKind::StartEvent && node.kind != NodeKind::MessageCatch &&
                    node.kind != NodeKind::MessageThrow && node.kind != NodeKind::EndEvent)
                    throw UnsupportedConstructError(qualified(c));
                continue;
            }
            if (c.local == "extensionElements") {
                read_extensions(c);
                continue;
            }
            if (c.local == "dataInputAssociation" || c.local == "dataOutputAssociation") {
                bool write = c.local == "dataOutputAssociation";
                for (const auto& ref : c.children) {
                    if (ref.ns != kBpmnNamespace) throw UnsupportedConstructError(qualified(ref));
                    if ((write && ref.local == "targetRef") || (!write && ref.local == "sourceRef")) {
                        std::string id = trim(ref.text);
                        if (id.empty()) throw SchemaError("empty data association reference" + where(ref));
                        proc.data_associations.push_back({node.id, id, write});
                    } else if (ref.local != "sourceRef" && ref.local != "targetRef" &&
                               ref.local != "documentation") {
                        throw UnsupportedConstructError(qualified(ref));
                    }
                }
                continue;
            }
            throw UnsupportedConstructError(qualified(c));
        }
    }

    void read_extensions(const xml::Element& e) {
        for (const auto& c : e.children) {
            if (c.ns == kEvidenceNamespace) {
                if (c.local == "evidenceSource") {
                    EvidenceSource s{required(c, "id"), required(c, "hostRef"), {}};
                    for (const auto& d : c.children) {
                        if (!(d.ns == kEvidenceNamespace && d.local == "evidenceData"))
                            throw UnsupportedConstructError(qualified(d));
                        s.data.push_back(read_evidence_data(d));
                    }
                    model_.evidence_sources.push_back(std::move(s));
                } else if (c.local == "evidenceAssociation") {
                    model_.evidence_associations.push_back(read_association(c));
                } else {
                    throw UnsupportedConstructError(qualified(c));
                }
            } else if (c.ns == kRiskNamespace) {
                if (c.local != "securityAnnotation") throw UnsupportedConstructError(qualified(c));
                model_.security_annotations.push_back({required(c, "id"), required(c, "elementRef"),
                                                       annotation_kind(c), c.attribute_or("label")});
            }
            // Extensions from other vocabularies are ignored.
        }
    }

    static EvidenceData read_evidence_data(const xml::Element& d) {
        EvidenceData out{required(d, "dataRef"), std::nullopt};
        static constexpr std::string_view keys[] = {"content", "format", "storageLocation", "accessControl",
                                                    "retention"};
        bool any = std::any_of(std::begin(keys), std::end(keys), [&](auto k) { return d.attribute(k); });
        if (any) {
            out.meta = EvidenceMeta{d.attribute_or("content"), d.attribute_or("format"),
                                    d.attribute_or("storageLocation"), d.attribute_or("accessControl"),
                                    d.attribute_or("retention")};
        }
        return out;
    }

    static EvidenceAssociation read_association(const xml::Element& c) {
        EvidenceAssociation a;
        a.id = required(c, "id");
        const std::string& kind = required(c, "kind");
        if (kind == "dependence")
            a.kind = AssociationKind::Dependence;
        else if (kind == "hardening")
            a.kind = AssociationKind::Hardening;
        else
            throw SchemaError("unknown evidence association kind '" + kind + "'" + where(c));
        a.from_data_ref = required(c, "sourceRef");
        a.to_data_ref = required(c, "targetRef");
        if (const std::string* m = c.attribute("measure")) {
            if (*m == "precision")
                a.measure = HardeningMeasure::Precision;
            else if (*m == "protection")
                a.measure = HardeningMeasure::Protection;
            else if (*m == "enhancement")
                a.measure = HardeningMeasure::Enhancement;
            else
                throw SchemaError("unknown hardening measure '" + *m + "'" + where(c));
        }
        return a;
    }

    static AnnotationKind annotation_kind(const xml::Element& c) {
        const std::string& k = required(c, "kind");
        if (k == "asset") return AnnotationKind::Asset;
        if (k == "threat") return AnnotationKind::Threat;
        if (k == "vulnerability") return AnnotationKind::Vulnerability;
        if (k == "riskTreatment") return AnnotationKind::RiskTreatment;
        throw SchemaError("unknown security annotation kind '" + k + "'" + where(c));
    }

    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    void assemble_pools() {
        std::vector<bool> used(processes_.size(), false);
        auto find_process = [&](const std::string& id) -> int {
            for (std::size_t i = 0; i < processes_.size(); ++i)
                if (processes_[i].id == id) return static_cast<int>(i);
            return -1;
        };
        for (const auto& p : participants_) {
            Pool pool;
            int raw = -1;
            if (!p.process_ref.empty()) {
                raw = find_process(p.process_ref);
                if (raw < 0) {
                    unresolved(p.process_ref);
                } else {
                    if (used[raw])
                        throw SchemaError("process '" + p.process_ref + "' referenced by two participants");
                    used[raw] = true;
                    pool = std::move(processes_[raw].pool);
                }
            }
            pool_raw_.push_back(raw);
            pool.id = p.id;
            pool.name = p.name;
            pool.process_id = p.process_ref;
            model_.pools.push_back(std::move(pool));
        }
        for (std::size_t i = 0; i < processes_.size(); ++i) {
            if (used[i]) continue;
            Pool pool = std::move(processes_[i].pool);
            pool.id = processes_[i].id;
            pool.name = processes_[i].name;
            pool.process_id = processes_[i].id;
            model_.pools.push_back(std::move(pool));
            pool_raw_.push_back(static_cast<int>(i));
        }
    }

    void unresolved(const std::string& id) {
        if (unresolved_set_.insert(id).second) unresolved_.push_back(id);
    }

    void resolve() {
        // Unique ids.
        std::unordered_set<std::string> seen;
        auto claim = [&](const std::string& id) {
            if (id.empty()) return;
            if (!seen.insert(id).second) throw SchemaError("duplicate id '" + id + "'");
        };
        claim(model_.id);
        claim(model_.collaboration_id);
        for (const auto& pool : model_.pools) {
            claim(pool.id);
            if (pool.process_id != pool.id) claim(pool.process_id);
            for (const auto& n : pool.nodes) claim(n.id);
            for (const auto& f : pool.sequence_flows) claim(f.id);
            for (const auto& d : pool.data_objects) claim(d.id);
            for (const auto& s : pool.data_stores) claim(s.id);
        }
        for (const auto& m : model_.message_flows) claim(m.id);
        for (const auto& s : model_.evidence_sources) claim(s.id);
        for (const auto& a : model_.evidence_associations) claim(a.id);
        for (const auto& a : model_.security_annotations) claim(a.id);
        for (const auto& raw : processes_)
            for (const auto& u : raw.undirected) claim(u.id);

        ModelIndex index(model_);
        auto check = [&](const std::string& id) {
            if (!index.contains(id)) unresolved(id);
        };

        for (const auto& pool : model_.pools) {
            for (const auto& f : pool.sequence_flows) {
                for (const auto* end : {&f.source_ref, &f.target_ref}) {
                    if (!index.node(*end)) {
                        check(*end);
                        if (index.contains(*end))
                            throw SchemaError("sequence flow '" + f.id + "' must connect flow nodes");
                    } else if (index.pool_of(*end) != &pool) {
                        throw SchemaError("sequence flow '" + f.id + "' crosses pools");
                    }
                }
            }
        }
        for (const auto& m : model_.message_flows) {
            for (const auto* end : {&m.source_ref, &m.target_ref}) {
                check(*end);
                if (index.contains(*end) && !index.node(*end))
                    throw SchemaError("message flow '" + m.id + "' must connect flow nodes");
            }
            if (index.node(m.source_ref) && index.node(m.target_ref) &&
                index.pool_of(m.source_ref) == index.pool_of(m.target_ref))
                throw SchemaError("message flow '" + m.id + "' connects nodes of the same pool");
        }

        // Data associations, directed and undirected.
        for (std::size_t p = 0; p < model_.pools.size(); ++p) {
            int raw = pool_raw_[p];
            if (raw < 0) continue;
            for (const auto& a : processes_[raw].data_associations) link_data(index, a);
            for (const auto& u : processes_[raw].undirected) {
                bool src_node = index.node(u.source) != nullptr;
                bool dst_node = index.node(u.target) != nullptr;
                bool src_data = index.data_object(u.source) || index.data_store(u.source);
                bool dst_data = index.data_object(u.target) || index.data_store(u.target);
                check(u.source);
                check(u.target);
                if (!index.contains(u.source) || !index.contains(u.target)) continue;
                if (src_node && dst_data) {
                    link_data(index, {u.source, u.target, positions_[u.source] < positions_[u.target]});
                } else if (dst_node && src_data) {
                    link_data(index, {u.target, u.source, positions_[u.target] < positions_[u.source]});
                } else {
                    throw SchemaError("association '" + u.id + "' must connect a flow node and a data element");
                }
            }
        }

        for (const auto& s : model_.evidence_sources) {
            check(s.host_ref);
            for (const auto& d : s.data) check(d.data_ref);
        }
        for (const auto& a : model_.evidence_associations) {
            check(a.from_data_ref);
            check(a.to_data_ref);
        }
        for (const auto& a : model_.security_annotations) check(a.element_ref);

        if (!unresolved_.empty()) throw ReferenceError(unresolved_);

        // Node invariants.
        for (const auto& pool : model_.pools) {
            for (const auto& n : pool.nodes) {
                std::size_t in = 0, out = 0;
                for (const auto& f : pool.sequence_flows) {
                    in += f.target_ref == n.id;
                    out += f.source_ref == n.id;
                }
                if (n.kind == NodeKind::StartEvent && in > 0)
                    throw SchemaError("start event '" + n.id + "' has an incoming sequence flow");
                if (n.kind == NodeKind::EndEvent && out > 0)
                    throw SchemaError("end event '" + n.id + "' has an outgoing sequence flow");
                if ((n.kind == NodeKind::XorGateway || n.kind == NodeKind::AndGateway) && (in == 0 || out == 0))
                    throw SchemaError("gateway '" + n.id + "' needs incoming and outgoing sequence flows");
            }
        }

        // Readers and writers in model order, deduplicated.
        ModelIndex final_index(model_);
        for (auto& pool : model_.pools) {
            for (auto& d : pool.data_objects) {
                detail::sort_by_model_order(d.readers, final_index);
                detail::sort_by_model_order(d.writers, final_index);
            }
            for (auto& s : pool.data_stores) {
                detail::sort_by_model_order(s.readers, final_index);
                detail::sort_by_model_order(s.writers, final_index);
            }
        }
    }

    void link_data(const ModelIndex& index, const RawDataAssociation& a) {
        if (!index.contains(a.data)) {
            unresolved(a.data);
            return;
        }
        std::vector<std::string>* list = nullptr;
        for (auto& pool : model_.pools) {
            for (auto& d : pool.data_objects)
                if (d.id == a.data) list = a.write ? &d.writers : &d.readers;
            for (auto& s : pool.data_stores)
                if (s.id == a.data) list = a.write ? &s.writers : &s.readers;
        }
        if (!list) throw SchemaError("data association of '" + a.node + "' must reference a data object or store");
        list->push_back(a.node);
    }

    struct Participant {
        std::string id;
        std::string name;
        std::string process_ref;
    };

    ProcessModel model_;
    std::vector<Participant> participants_;
    std::vector<RawProcess> processes_;
    std::vector<int> pool_raw_;  // pool index -> raw process index, -1 for none
    std::unordered_map<std::string, std::size_t> positions_;
    std::size_t position_ = 0;
    std::vector<std::string> unresolved_;
    std::unordered_set<std::string> unresolved_set_;
};

}  // namespace detail

/// Parses a BPMN document. Structural problems throw; semantic rule
/// violations (E01..H01) are left to the validator.
inline ProcessModel parse_bpmn_xml(std::string_view bytes) {
    xml::Element root = xml::parse(bytes);
    return detail::BpmnReader().read(root);
}

/// Canonical serialization; byte-stable for equal models.
inline std::string write_bpmn_xml(const ProcessModel& model) {
    using xml::Node;
    ModelIndex index(model);

    Node root("bpmn:definitions");
    root.attr("id", model.id)
        .attr("targetNamespace", std::string(kModelsNamespace))
        .attr("xmlns:bpmn", std::string(kBpmnNamespace))
        .attr("xmlns:ev", std::string(kEvidenceNamespace))
        .attr("xmlns:risk", std::string(kRiskNamespace));

    if (!model.evidence_sources.empty() || !model.evidence_associations.empty() ||
        !model.security_annotations.empty()) {
        Node& ext = root.add(Node("bpmn:extensionElements"));
        for (const auto& s : model.evidence_sources) {
            Node& src = ext.add(Node("ev:evidenceSource"));
            src.attr("id", s.id).attr("hostRef", s.host_ref);
            for (const auto& d : s.data) {
                Node& data = src.add(Node("ev:evidenceData"));
                data.attr("dataRef", d.data_ref);
                if (d.meta) {
                    data.attr("content", d.meta->content)
                        .attr("format", d.meta->format)
                        .attr("storageLocation", d.meta->storage_location)
                        .attr("accessControl", d.meta->access_control)
                        .attr("retention", d.meta->retention);
                }
            }
        }
        for (const auto& a : model.evidence_associations) {
            Node& n = ext.add(Node("ev:evidenceAssociation"));
            n.attr("id", a.id)
                .attr("kind", std::string(to_string(a.kind)))
                .attr("sourceRef", a.from_data_ref)
                .attr("targetRef", a.to_data_ref);
            if (a.measure) n.attr("measure", std::string(to_string(*a.measure)));
        }
        for (const auto& a : model.security_annotations) {
            ext.add(Node("risk:securityAnnotation"))
                .attr("id", a.id)
                .attr("elementRef", a.element_ref)
                .attr("kind", std::string(to_string(a.kind)))
                .attr_if("label", a.label);
        }
    }

    bool collaboration = !model.collaboration_id.empty() || model.pools.size() != 1 ||
                         !model.message_flows.empty() ||
                         (model.pools.size() == 1 && model.pools[0].id != model.pools[0].process_id);
    if (collaboration) {
        Node& collab = root.add(Node("bpmn:collaboration"));
        collab.attr("id", model.collaboration_id.empty() ? model.id + "_collaboration" : model.collaboration_id);
        for (const auto& pool : model.pools)
            collab.add(Node("bpmn:participant"))
                .attr("id", pool.id)
                .attr_if("name", pool.name)
                .attr_if("processRef", pool.process_id);
        for (const auto& m : model.message_flows)
            collab.add(Node("bpmn:messageFlow"))
                .attr("id", m.id)
                .attr_if("name", m.name)
                .attr("sourceRef", m.source_ref)
                .attr("targetRef", m.target_ref);
    }

    std::unordered_map<std::string, bool> message_target;
    for (const auto& m : model.message_flows) message_target[m.target_ref] = true;

    for (const auto& pool : model.pools) {
        if (pool.process_id.empty()) continue;
        Node& proc = root.add(Node("bpmn:process"));
        proc.attr("id", pool.process_id);
        if (!collaboration) proc.attr_if("name", pool.name);
        for (const auto& n : pool.nodes) {
            static constexpr std::string_view names[] = {"bpmn:startEvent",        "bpmn:endEvent",
                                                         "bpmn:task",              "bpmn:exclusiveGateway",
                                                         "bpmn:parallelGateway",   "bpmn:intermediateCatchEvent",
                                                         "bpmn:intermediateThrowEvent"};
            Node& node = proc.add(Node(std::string(names[static_cast<int>(n.kind)])));
            node.attr("id", n.id).attr_if("name", n.name);
            auto each_data = [&](bool write, auto&& emit) {
                for (const auto& p : model.pools) {
                    for (const auto& d : p.data_objects) {
                        const auto& list = write ? d.writers : d.readers;
                        if (std::find(list.begin(), list.end(), n.id) != list.end()) emit(d.id);
                    }
                    for (const auto& s : p.data_stores) {
                        const auto& list = write ? s.writers : s.readers;
                        if (std::find(list.begin(), list.end(), n.id) != list.end()) emit(s.id);
                    }
                }
            };
            each_data(false, [&](const std::string& id) {
                node.add(Node("bpmn:dataInputAssociation")).add(Node("bpmn:sourceRef")).text = id;
            });
            each_data(true, [&](const std::string& id) {
                node.add(Node("bpmn:dataOutputAssociation")).add(Node("bpmn:targetRef")).text = id;
            });
            bool message_event = n.kind == NodeKind::MessageCatch || n.kind == NodeKind::MessageThrow ||
                                 (n.kind == NodeKind::StartEvent && message_target.count(n.id));
            if (message_event) node.add(Node("bpmn:messageEventDefinition"));
        }
        for (const auto& f : pool.sequence_flows)
            proc.add(Node("bpmn:sequenceFlow"))
                .attr("id", f.id)
                .attr_if("name", f.name)
                .attr("sourceRef", f.source_ref)
                .attr("targetRef", f.target_ref);
        for (const auto& d : pool.data_objects) {
            Node& n = proc.add(Node("bpmn:dataObject"));
            n.attr("id", d.id).attr_if("name", d.name);
            if (d.persistent) n.attr("ev:persistent", "true");
        }
        for (const auto& s : pool.data_stores)
            proc.add(Node("bpmn:dataStoreReference")).attr("id", s.id).attr_if("name", s.name);
    }
    return xml::write_document(root);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ProcessModel load_bpmn_file(const std::string& path) { return parse_bpmn_xml(read_file(path)); }

}  // namespace frbpmn
