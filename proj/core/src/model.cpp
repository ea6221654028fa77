#include "bef4llm/model.hpp"

#include <algorithm>

#include "bef4llm/xml.hpp"

namespace bef {

bool is_gateway(NodeKind k) {
  return k == NodeKind::GatewayXOR || k == NodeKind::GatewayAND ||
         k == NodeKind::GatewayOR || k == NodeKind::GatewayEvent;
}

bool is_activity(NodeKind k) {
  return k == NodeKind::Task || k == NodeKind::SubProcess;
}

bool is_event(NodeKind k) {
  return k == NodeKind::StartEvent || k == NodeKind::IntermediateEvent ||
         k == NodeKind::EndEvent;
}

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::StartEvent: return "StartEvent";
    case NodeKind::IntermediateEvent: return "IntermediateEvent";
    case NodeKind::EndEvent: return "EndEvent";
    case NodeKind::Task: return "Task";
    case NodeKind::SubProcess: return "SubProcess";
    case NodeKind::GatewayXOR: return "GatewayXOR";
    case NodeKind::GatewayAND: return "GatewayAND";
    case NodeKind::GatewayOR: return "GatewayOR";
    case NodeKind::GatewayEvent: return "GatewayEvent";
  }
  return "?";
}

bool ProcessModel::has_pool(const std::string& id) const {
  return std::any_of(pools.begin(), pools.end(),
                     [&](const Pool& p) { return p.id == id; });
}

std::vector<const FlowObject*> ProcessModel::nodes_sorted() const {
  std::vector<const FlowObject*> out;
  out.reserve(flow_objects.size());
  for (const auto& [_, fo] : flow_objects) out.push_back(&fo);
  return out;  // map iteration is already id-ordered
}

std::vector<const Flow*> ProcessModel::sequence_flows() const {
  std::vector<const Flow*> out;
  for (const auto& f : flows)
    if (f.kind == FlowKind::Sequence) out.push_back(&f);
  return out;
}

std::vector<const Flow*> ProcessModel::message_flows() const {
  std::vector<const Flow*> out;
  for (const auto& f : flows)
    if (f.kind == FlowKind::Message) out.push_back(&f);
  return out;
}

namespace {

std::optional<NodeKind> node_kind_for(const std::string& elem) {
  if (elem == "startEvent") return NodeKind::StartEvent;
  if (elem == "endEvent") return NodeKind::EndEvent;
  if (elem == "intermediateCatchEvent" || elem == "intermediateThrowEvent" ||
      elem == "boundaryEvent")
    return NodeKind::IntermediateEvent;
  if (elem == "task" || elem == "userTask" || elem == "serviceTask" ||
      elem == "sendTask" || elem == "receiveTask" || elem == "scriptTask" ||
      elem == "manualTask" || elem == "businessRuleTask" ||
      elem == "callActivity")
    return NodeKind::Task;
  if (elem == "subProcess" || elem == "adHocSubProcess" ||
      elem == "transaction")
    return NodeKind::SubProcess;
  if (elem == "exclusiveGateway") return NodeKind::GatewayXOR;
  if (elem == "parallelGateway") return NodeKind::GatewayAND;
  if (elem == "inclusiveGateway" || elem == "complexGateway")
    return NodeKind::GatewayOR;
  if (elem == "eventBasedGateway") return NodeKind::GatewayEvent;
  return std::nullopt;
}

bool has_message_definition(const xml::Element& e) {
  return e.child("messageEventDefinition") != nullptr;
}

struct ParserState {
  ProcessModel model;
  int anon_counter = 0;

  void add_node(FlowObject fo) {
    if (fo.id.empty())
      throw ModelError(ModelError::Code::UnresolvedReference, "",
                       "flow object without id");
    if (model.flow_objects.count(fo.id))
      throw ModelError(ModelError::Code::DuplicateId, fo.id,
                       "duplicate id \"" + fo.id + "\"");
    model.flow_objects.emplace(fo.id, std::move(fo));
  }

  Process& process_named(const std::string& id) {
    for (auto& p : model.processes)
      if (p.id == id) return p;
    model.processes.push_back(Process{id, {}});
    return model.processes.back();
  }

  void read_flow_node(const xml::Element& e, NodeKind kind,
                      Process& process) {
    FlowObject fo;
    if (const auto* id = e.attr("id")) fo.id = *id;
    fo.kind = kind;
    if (const auto* name = e.attr("name")) fo.label = *name;
    fo.process_id = process.id;
    if (is_event(kind)) fo.is_message = has_message_definition(e);
    if (e.name == "boundaryEvent") {
      if (const auto* at = e.attr("attachedToRef")) fo.attached_to = *at;
    }
    process.node_ids.insert(fo.id);
    add_node(std::move(fo));
  }

  void read_sequence_flow(const xml::Element& e) {
    Flow f;
    if (const auto* id = e.attr("id")) f.id = *id;
    if (const auto* s = e.attr("sourceRef")) f.source = *s;
    if (const auto* t = e.attr("targetRef")) f.target = *t;
    f.kind = FlowKind::Sequence;
    model.flows.push_back(std::move(f));
  }

  void read_process(const xml::Element& proc_elem, const std::string& id) {
    Process& process = process_named(id);
    for (const auto& child : proc_elem.children) {
      if (child->ns != kBpmnModelNs) continue;
      if (auto kind = node_kind_for(child->name)) {
        read_flow_node(*child, *kind, process);
        // subProcess contents stay opaque: children are not descended
      } else if (child->name == "sequenceFlow") {
        read_sequence_flow(*child);
      } else if (child->name == "laneSet") {
        read_lane_set(*child, id);
      }
      // data objects, associations, annotations: ignored
    }
  }

  void read_lane_set(const xml::Element& lane_set,
                     const std::string& process_id) {
    Pool* pool = nullptr;
    for (auto& po : model.pools) {
      if (std::find(po.process_ids.begin(), po.process_ids.end(),
                    process_id) != po.process_ids.end()) {
        pool = &po;
        break;
      }
    }
    for (const auto* lane_elem : lane_set.children_named("lane")) {
      Lane lane;
      if (const auto* id = lane_elem->attr("id")) lane.id = *id;
      if (const auto* name = lane_elem->attr("name")) lane.label = *name;
      for (const auto* ref : lane_elem->children_named("flowNodeRef"))
        lane.node_ids.push_back(ref->text);
      if (pool) pool->lanes.push_back(std::move(lane));
    }
  }

  void read_collaboration(const xml::Element& collab) {
    for (const auto& child : collab.children) {
      if (child->ns != kBpmnModelNs) continue;
      if (child->name == "participant") {
        Pool pool;
        if (const auto* id = child->attr("id")) pool.id = *id;
        if (const auto* name = child->attr("name")) pool.label = *name;
        if (const auto* ref = child->attr("processRef"))
          pool.process_ids.push_back(*ref);
        if (pool.id.empty())
          throw ModelError(ModelError::Code::UnresolvedReference, "",
                           "participant without id");
        for (const auto& existing : model.pools)
          if (existing.id == pool.id)
            throw ModelError(ModelError::Code::DuplicateId, pool.id,
                             "duplicate id \"" + pool.id + "\"");
        model.pools.push_back(std::move(pool));
      } else if (child->name == "messageFlow") {
        Flow f;
        if (const auto* id = child->attr("id")) f.id = *id;
        if (const auto* s = child->attr("sourceRef")) f.source = *s;
        if (const auto* t = child->attr("targetRef")) f.target = *t;
        f.kind = FlowKind::Message;
        model.flows.push_back(std::move(f));
      }
    }
  }

  void resolve() {
    for (const auto& f : model.flows) {
      for (const std::string* endpoint : {&f.source, &f.target}) {
        if (endpoint->empty() || (!model.flow_objects.count(*endpoint) &&
                                  !model.has_pool(*endpoint)))
          throw ModelError(ModelError::Code::UnresolvedReference, *endpoint,
                           "unresolved flow endpoint \"" + *endpoint +
                               "\" on flow \"" + f.id + "\"");
      }
    }
    for (const auto& [id, fo] : model.flow_objects) {
      if (fo.attached_to && !model.flow_objects.count(*fo.attached_to))
        throw ModelError(ModelError::Code::UnresolvedReference,
                         *fo.attached_to,
                         "unresolved attachedToRef \"" + *fo.attached_to +
                             "\" on \"" + id + "\"");
    }
  }
};

}  // namespace

ProcessModel parse_model(const std::string& xml_text) {
  xml::Document doc = xml::parse(xml_text);
  if (!doc.ok())
    throw ModelError(ModelError::Code::UnsupportedRoot, "",
                     doc.error ? doc.error->message : "empty document");
  const xml::Element& root = *doc.root;
  if (root.name != "definitions" || root.ns != kBpmnModelNs)
    throw ModelError(ModelError::Code::UnsupportedRoot, root.name,
                     "root element is not a BPMN definitions element");

  ParserState state;
  // collaboration first so lanes can attach to their pools
  for (const auto& child : root.children) {
    if (child->ns == kBpmnModelNs && child->name == "collaboration")
      state.read_collaboration(*child);
  }
  bool implicit_nodes = false;
  for (const auto& child : root.children) {
    if (child->ns != kBpmnModelNs) continue;
    if (child->name == "process") {
      std::string id;
      if (const auto* pid = child->attr("id")) id = *pid;
      if (id.empty()) id = "_process" + std::to_string(state.anon_counter++);
      state.read_process(*child, id);
    } else if (node_kind_for(child->name) || child->name == "sequenceFlow") {
      implicit_nodes = true;
    }
  }
  if (implicit_nodes) {
    // bare definitions: all loose nodes form one anonymous process
    Process& anon = state.process_named("_implicit");
    for (const auto& child : root.children) {
      if (child->ns != kBpmnModelNs) continue;
      if (auto kind = node_kind_for(child->name))
        state.read_flow_node(*child, *kind, anon);
      else if (child->name == "sequenceFlow")
        state.read_sequence_flow(*child);
    }
  }
  state.resolve();
  return std::move(state.model);
}

}  // namespace bef
