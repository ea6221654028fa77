#include "doctest.h"

#include "bef4llm/graph.hpp"
#include "bef4llm/model.hpp"
#include "bef4llm/xml.hpp"
#include "support/fixtures.hpp"

using namespace bef;
using bef::testing::read_fixture;

TEST_CASE("xml parser reports syntax errors with a line") {
  const auto doc = xml::parse("<a>\n<b>\n</a>");
  CHECK_FALSE(doc.ok());
  REQUIRE(doc.error.has_value());
  CHECK(doc.error->line >= 2);
}

TEST_CASE("xml parser splits namespaces") {
  const auto doc = xml::parse(
      "<d xmlns=\"urn:x\"><e attr=\"1\">hi</e></d>");
  REQUIRE(doc.ok());
  CHECK(doc.root->ns == "urn:x");
  CHECK(doc.root->name == "d");
  const auto* e = doc.root->child("e");
  REQUIRE(e != nullptr);
  CHECK(*e->attr("attr") == "1");
  CHECK(e->text == "hi");
}

TEST_CASE("M1 parses into the expected graph") {
  const ProcessModel model = parse_model(read_fixture("M1.bpmn"));
  CHECK(model.flow_objects.size() == 7);
  CHECK(model.sequence_flows().size() == 7);
  CHECK(model.processes.size() == 1);
  CHECK(model.node("g1")->kind == NodeKind::GatewayXOR);
  CHECK(model.node("a1")->label == "Review request");

  const auto [in, out] = degrees(model, "g1");
  CHECK(in == 1);
  CHECK(out == 2);
  CHECK(*find_matching_join(model, "g1") == "g2");
  CHECK(diameter_nodes(model) == 6);
}

TEST_CASE("task subtypes collapse and boundary events attach") {
  const std::string xml = R"(<?xml version="1.0"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <process id="p">
    <startEvent id="s"/>
    <userTask id="t" name="Do it"/>
    <boundaryEvent id="b" attachedToRef="t"/>
    <endEvent id="e"/>
    <endEvent id="e2"/>
    <sequenceFlow id="f1" sourceRef="s" targetRef="t"/>
    <sequenceFlow id="f2" sourceRef="t" targetRef="e"/>
    <sequenceFlow id="f3" sourceRef="b" targetRef="e2"/>
  </process>
</definitions>)";
  const ProcessModel model = parse_model(xml);
  CHECK(model.node("t")->kind == NodeKind::Task);
  CHECK(model.node("b")->kind == NodeKind::IntermediateEvent);
  CHECK(*model.node("b")->attached_to == "t");
}

TEST_CASE("collaboration yields pools and message flows") {
  const std::string xml = R"(<?xml version="1.0"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <collaboration id="c">
    <participant id="po1" name="Customer" processRef="p1"/>
    <participant id="po2" name="Shop" processRef="p2"/>
    <messageFlow id="m1" sourceRef="t1" targetRef="t2"/>
  </collaboration>
  <process id="p1">
    <startEvent id="s1"/>
    <task id="t1" name="Send order"/>
    <endEvent id="e1"/>
    <sequenceFlow id="f1" sourceRef="s1" targetRef="t1"/>
    <sequenceFlow id="f2" sourceRef="t1" targetRef="e1"/>
  </process>
  <process id="p2">
    <startEvent id="s2"/>
    <task id="t2" name="Receive order"/>
    <endEvent id="e2"/>
    <sequenceFlow id="f3" sourceRef="s2" targetRef="t2"/>
    <sequenceFlow id="f4" sourceRef="t2" targetRef="e2"/>
  </process>
</definitions>)";
  const ProcessModel model = parse_model(xml);
  CHECK(model.pools.size() == 2);
  CHECK(model.message_flows().size() == 1);
  CHECK(model.has_pool("po1"));
}

TEST_CASE("unresolved flow endpoints throw") {
  const std::string xml = R"(<?xml version="1.0"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <process id="p">
    <startEvent id="s"/>
    <endEvent id="e"/>
    <sequenceFlow id="f" sourceRef="s" targetRef="ghost"/>
  </process>
</definitions>)";
  CHECK_THROWS_AS(parse_model(xml), ModelError);
}

TEST_CASE("back edge removal leaves the loop body acyclic") {
  const std::string xml = R"(<?xml version="1.0"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <process id="p">
    <startEvent id="s"/>
    <task id="a" name="Work"/>
    <task id="b" name="Rework"/>
    <endEvent id="e"/>
    <sequenceFlow id="f1" sourceRef="s" targetRef="a"/>
    <sequenceFlow id="f2" sourceRef="a" targetRef="b"/>
    <sequenceFlow id="f3" sourceRef="b" targetRef="a"/>
    <sequenceFlow id="f4" sourceRef="b" targetRef="e"/>
  </process>
</definitions>)";
  const ProcessModel model = parse_model(xml);
  const SequenceGraph dag = SequenceGraph(model).without_back_edges(model);
  CHECK(dag.edges().size() == 3);  // b->a dropped
  CHECK(diameter_nodes(model) == 4);
}
