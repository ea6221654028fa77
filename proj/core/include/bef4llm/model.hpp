#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bef {

inline constexpr const char* kBpmnModelNs =
    "http://www.omg.org/spec/BPMN/20100524/MODEL";

enum class NodeKind {
  StartEvent,
  IntermediateEvent,
  EndEvent,
  Task,
  SubProcess,
  GatewayXOR,
  GatewayAND,
  GatewayOR,
  GatewayEvent,
};

enum class FlowKind { Sequence, Message };

bool is_gateway(NodeKind k);
bool is_activity(NodeKind k);
bool is_event(NodeKind k);
const char* to_string(NodeKind k);

struct FlowObject {
  std::string id;
  NodeKind kind = NodeKind::Task;
  std::string label;                    // empty when unlabeled
  bool is_message = false;              // message event definition present
  std::optional<std::string> attached_to;  // boundary events only
  std::string process_id;
};

struct Flow {
  std::string id;
  std::string source;  // flow object or pool id
  std::string target;
  FlowKind kind = FlowKind::Sequence;
};

struct Lane {
  std::string id;
  std::string label;
  std::vector<std::string> node_ids;
};

struct Pool {
  std::string id;
  std::string label;
  std::vector<Lane> lanes;
  std::vector<std::string> process_ids;
};

struct Process {
  std::string id;
  std::set<std::string> node_ids;
};

struct ProcessModel {
  std::vector<Pool> pools;
  std::vector<Process> processes;
  std::map<std::string, FlowObject> flow_objects;
  std::vector<Flow> flows;

  const FlowObject* node(const std::string& id) const {
    auto it = flow_objects.find(id);
    return it == flow_objects.end() ? nullptr : &it->second;
  }
  bool has_pool(const std::string& id) const;

  std::vector<const FlowObject*> nodes_sorted() const;
  std::vector<const Flow*> sequence_flows() const;
  std::vector<const Flow*> message_flows() const;
};

struct ModelError : std::runtime_error {
  enum class Code { UnresolvedReference, DuplicateId, UnsupportedRoot };
  Code code;
  std::string id;  // offending id or element name

  ModelError(Code c, std::string offending, const std::string& what)
      : std::runtime_error(what), code(c), id(std::move(offending)) {}
};

// Parses BPMN 2.0 interchange XML into the typed process graph. Task
// subtypes collapse to Task, subProcess stays an opaque node, boundary
// events become IntermediateEvent with attached_to set. DI, data objects,
// associations and annotations are ignored. Throws ModelError.
ProcessModel parse_model(const std::string& xml_text);

}  // namespace bef
