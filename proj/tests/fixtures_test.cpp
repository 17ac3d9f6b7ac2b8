#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace frbpmn;
using namespace frbpmn::testing;

namespace {

std::size_t node_count(const ProcessModel& m) {
    std::size_t n = 0;
    for (const auto& p : m.pools) n += p.nodes.size();
    return n;
}

std::map<std::string, NodeKind> node_kinds(const ProcessModel& m) {
    std::map<std::string, NodeKind> out;
    for (const auto& p : m.pools)
        for (const auto& n : p.nodes) out[n.id] = n.kind;
    return out;
}

const EvidenceAssociation* association(const ProcessModel& m, const std::string& id) {
    for (const auto& a : m.evidence_associations)
        if (a.id == id) return &a;
    return nullptr;
}

}  // namespace

TEST(Fixtures, ModelsMatchPinnedShape) {
    for (const auto& [name, exp] : expectations().at("models").items()) {
        auto m = load_fixture(name);
        EXPECT_EQ(node_count(m), exp.at("nodes").get<std::size_t>()) << name;
        auto contexts = evidence_contexts(m);
        EXPECT_EQ(contexts.size(), exp.at("contexts").get<std::size_t>()) << name;
        EXPECT_EQ(rule_ids(validate(m)), exp.at("findings").get<std::vector<std::string>>()) << name;
        if (exp.contains("contexts_list")) {
            std::vector<std::pair<std::string, std::string>> got;
            for (const auto& c : contexts) got.emplace_back(c.source->id, c.data->id);
            std::vector<std::pair<std::string, std::string>> want;
            for (const auto& k : exp.at("contexts_list")) want.emplace_back(k[0], k[1]);
            EXPECT_EQ(got, want) << name;
        }
    }
}

TEST(Fixtures, EveryModelRoundTrips) {
    for (const auto& entry : std::filesystem::directory_iterator(FRBPMN_FIXTURES)) {
        if (entry.path().extension() != ".bpmn") continue;
        auto m = load_bpmn_file(entry.path().string());
        EXPECT_EQ(parse_bpmn_xml(write_bpmn_xml(m)), m) << entry.path();
    }
}

TEST(Fixtures, MinimalIsInCanonicalForm) {
    auto text = read_file(fixture_path("minimal.bpmn"));
    EXPECT_EQ(write_bpmn_xml(parse_bpmn_xml(text)), text);
}

TEST(Fixtures, EveryTraceParses) {
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fixture_path("traces"))) {
        EXPECT_NO_THROW(parse_trace(read_file(entry.path().string()))) << entry.path();
        ++n;
    }
    EXPECT_EQ(n, 13u);
}

TEST(Fixtures, BaseModelOnlyEvidencesThePermitStore) {
    auto m = load_fixture("avp-base.bpmn");
    auto contexts = evidence_contexts(m);
    ASSERT_EQ(contexts.size(), 1u);
    EXPECT_EQ(contexts[0].source->host_ref, "plt_permit_store");
    EXPECT_EQ(contexts[0].data->id, "parking_permit");
    EXPECT_TRUE(m.evidence_associations.empty());
}

TEST(Fixtures, ForensicReadyModelExtendsBase) {
    auto base = load_fixture("avp-base.bpmn");
    auto fin = load_fixture("avp-final.bpmn");
    auto base_nodes = node_kinds(base);
    auto fin_nodes = node_kinds(fin);
    for (const auto& [id, kind] : base_nodes) {
        ASSERT_TRUE(fin_nodes.count(id)) << id;
        EXPECT_EQ(fin_nodes.at(id), kind) << id;
    }
    EXPECT_EQ(fin_nodes.size() - base_nodes.size(), 2u);
    EXPECT_EQ(fin_nodes.at("psp_retain_permit"), NodeKind::Task);
    EXPECT_EQ(fin_nodes.at("plt_check_access"), NodeKind::Task);
    EXPECT_EQ(fin.message_flows, base.message_flows);
    EXPECT_EQ(fin.pools.size(), 3u);
}

TEST(Fixtures, ForensicReadyAssociations) {
    auto m = load_fixture("avp-final.bpmn");
    ModelIndex index(m);
    auto* req = association(m, "dep_request_log");
    ASSERT_TRUE(req);
    EXPECT_EQ(req->kind, AssociationKind::Dependence);
    EXPECT_EQ(index.pool_of(req->from_data_ref)->id, "pool_psp");
    EXPECT_EQ(index.pool_of(req->to_data_ref)->id, "pool_plt");
    auto* resp = association(m, "dep_response_log");
    ASSERT_TRUE(resp);
    EXPECT_EQ(index.pool_of(resp->from_data_ref)->id, "pool_plt");
    EXPECT_EQ(index.pool_of(resp->to_data_ref)->id, "pool_psp");
    auto* permit = association(m, "hard_permit");
    ASSERT_TRUE(permit);
    EXPECT_EQ(permit->kind, AssociationKind::Hardening);
    EXPECT_EQ(permit->to_data_ref, "parking_permit");
    // The permit proof is kept outside the pool that issues the permit.
    EXPECT_NE(index.pool_of(permit->from_data_ref)->id, index.pool_of(permit->to_data_ref)->id);
    auto* payment = association(m, "hard_payment_request");
    ASSERT_TRUE(payment);
    EXPECT_EQ(index.pool_of(payment->from_data_ref)->id, index.pool_of(payment->to_data_ref)->id);
}

TEST(Fixtures, EveryAttackHasAThreatAnnotation) {
    auto m = load_fixture("avp-final.bpmn");
    for (Attack a : kAllAttacks) {
        bool found = false;
        for (const auto& s : m.security_annotations)
            found |= s.kind == AnnotationKind::Threat && s.label == to_string(a);
        EXPECT_TRUE(found) << to_string(a);
    }
}

TEST(Fixtures, RiskRegisterCategories) {
    auto risks = parse_risk_register(read_file(fixture_path("avp-risks.json")));
    ASSERT_EQ(risks.size(), 6u);
    std::map<std::string, RiskCategory> cats;
    for (const auto& r : risks) cats[r.id] = r.category;
    EXPECT_EQ(cats.at("case-1"), RiskCategory::Residual);
    EXPECT_EQ(cats.at("case-2"), RiskCategory::Residual);
    EXPECT_EQ(cats.at("case-3"), RiskCategory::Residual);
    EXPECT_EQ(cats.at("case-4"), RiskCategory::Retained);
    EXPECT_EQ(cats.at("case-5"), RiskCategory::Dispute);
    EXPECT_EQ(cats.at("case-6"), RiskCategory::Unknown);
    auto fin = load_fixture("avp-final.bpmn");
    ModelIndex index(fin);
    for (const auto& r : risks) {
        EXPECT_FALSE(r.covering_contexts.empty()) << r.id;
        for (const auto& e : r.affected_elements) EXPECT_TRUE(index.find(e)) << r.id << " " << e;
    }
    EXPECT_EQ(parse_risk_register(write_risk_register(risks)), risks);
}

TEST(Fixtures, MutationCasesAreWellFormed) {
    const auto& pinned = expectations().at("mutations");
    auto base = load_fixture(pinned.at("model"));
    EXPECT_GE(pinned.at("cases").size(), 10u);
    for (const auto& c : pinned.at("cases")) {
        auto m = base;
        EXPECT_NO_THROW(apply_mutation(m, c)) << c.at("name");
        EXPECT_NE(m, base) << c.at("name");
    }
}

TEST(Fixtures, StoreInjectionTrace) {
    auto t = parse_trace(read_file(fixture_path("traces/store-injection.jsonl")));
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t.records[0].source, "es_permit_store");
    EXPECT_EQ(t.records[0].data, "parking_permit");
    EXPECT_FALSE(t.records[0].hardens);
}
