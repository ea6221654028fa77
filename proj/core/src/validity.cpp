#include "bef4llm/validity.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "bef4llm/embedded_data.hpp"
#include "bef4llm/model.hpp"
#include "bef4llm/xml.hpp"

namespace bef {

namespace {

const std::set<std::string> kFlowNodeElements = {
    "startEvent",        "endEvent",
    "intermediateCatchEvent", "intermediateThrowEvent",
    "boundaryEvent",     "task",
    "userTask",          "serviceTask",
    "sendTask",          "receiveTask",
    "scriptTask",        "manualTask",
    "businessRuleTask",  "callActivity",
    "subProcess",        "adHocSubProcess",
    "transaction",       "exclusiveGateway",
    "parallelGateway",   "inclusiveGateway",
    "complexGateway",    "eventBasedGateway",
};

// Attributes whose values must resolve to an existing id.
const std::vector<std::string> kReferenceAttributes = {
    "sourceRef", "targetRef", "processRef", "attachedToRef", "default"};

std::string describe(const xml::Element& e) {
  if (const auto* id = e.attr("id")) return *id;
  return e.name + " at line " + std::to_string(e.line);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, ',')) {
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const char* to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::Malformed: return "Malformed";
    case ValidationCode::WrongNamespace: return "WrongNamespace";
    case ValidationCode::SchemaViolation: return "SchemaViolation";
    case ValidationCode::DuplicateId: return "DuplicateId";
    case ValidationCode::DanglingRef: return "DanglingRef";
    case ValidationCode::TooFewNodes: return "TooFewNodes";
  }
  return "?";
}

std::string ValidationError::line() const {
  return std::string(to_string(code)) + ": " + message;
}

std::vector<std::string> ValidationReport::error_lines() const {
  std::vector<std::string> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(e.line());
  return out;
}

SchemaRules SchemaRules::parse(const std::string& tsv) {
  SchemaRules rules;
  std::istringstream stream(tsv);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string element, parents, required;
    std::getline(fields, element, '\t');
    std::getline(fields, parents, '\t');
    std::getline(fields, required, '\t');
    Rule rule;
    rule.parents = split_csv(parents);
    if (required != "-") rule.required_attributes = split_csv(required);
    rules.elements[element] = std::move(rule);
  }
  return rules;
}

SchemaRules SchemaRules::bundled() { return parse(data::kSchemaRulesTsv); }

SchemaRules SchemaRules::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read schema rules: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

double validity_score(const ValidationReport& report) {
  return report.valid ? 1.0 : 0.0;
}

ValidationReport validate(const std::string& xml_text) {
  static const SchemaRules rules = SchemaRules::bundled();
  return validate(xml_text, rules);
}

ValidationReport validate(const std::string& xml_text,
                          const SchemaRules& rules) {
  ValidationReport report;
  auto fail = [&](ValidationCode code, std::string location,
                  std::string message) {
    report.errors.push_back(
        {code, std::move(location), std::move(message)});
  };

  // stage 1: well-formedness
  xml::Document doc = xml::parse(xml_text);
  if (!doc.ok()) {
    const auto& err = doc.error ? *doc.error : xml::ParseError{"empty", 0, 0};
    fail(ValidationCode::Malformed, "line " + std::to_string(err.line),
         "not well-formed XML at line " + std::to_string(err.line) + ": " +
             err.message);
    return report;
  }
  const xml::Element& root = *doc.root;

  // stage 2: root element and namespace
  if (root.name != "definitions" || root.ns != kBpmnModelNs) {
    fail(ValidationCode::WrongNamespace, root.name,
         "root element \"" + root.name + "\" in namespace \"" + root.ns +
             "\" is not a BPMN 2.0 definitions element");
    return report;
  }

  // stage 3: schema rules (vocabulary, containment, required attributes)
  std::function<void(const xml::Element&, const xml::Element*)> walk =
      [&](const xml::Element& e, const xml::Element* parent) {
        if (e.ns != kBpmnModelNs) return;  // DI and extensions are ignored
        auto it = rules.elements.find(e.name);
        if (it == rules.elements.end()) {
          fail(ValidationCode::SchemaViolation, describe(e),
               "unknown element \"" + e.name + "\" at line " +
                   std::to_string(e.line));
        } else {
          const auto& rule = it->second;
          const std::string parent_name =
              parent ? (parent->ns == kBpmnModelNs ? parent->name : "")
                     : "ROOT";
          const bool parent_ok =
              std::any_of(rule.parents.begin(), rule.parents.end(),
                          [&](const std::string& p) {
                            return p == "*" || p == parent_name;
                          });
          if (!parent_ok)
            fail(ValidationCode::SchemaViolation, describe(e),
                 "element \"" + e.name + "\" is not allowed inside \"" +
                     parent_name + "\" (line " + std::to_string(e.line) +
                     ")");
          for (const auto& attr : rule.required_attributes) {
            if (!e.attr(attr))
              fail(ValidationCode::SchemaViolation, describe(e),
                   "missing " + attr + " for " + e.name + " " + describe(e));
          }
        }
        for (const auto& child : e.children) walk(*child, &e);
      };
  walk(root, nullptr);
  if (!report.errors.empty()) return report;

  // stage 4: id uniqueness
  std::set<std::string> ids;
  std::function<void(const xml::Element&)> collect_ids =
      [&](const xml::Element& e) {
        if (e.ns == kBpmnModelNs) {
          if (const auto* id = e.attr("id")) {
            if (!ids.insert(*id).second)
              fail(ValidationCode::DuplicateId, *id,
                   "duplicate id \"" + *id + "\"");
          }
          for (const auto& child : e.children) collect_ids(*child);
        }
      };
  collect_ids(root);
  if (!report.errors.empty()) return report;

  // stage 5: reference integrity
  std::function<void(const xml::Element&)> check_refs =
      [&](const xml::Element& e) {
        if (e.ns != kBpmnModelNs) return;
        for (const auto& attr : kReferenceAttributes) {
          const auto* value = e.attr(attr);
          if (value && !ids.count(*value))
            fail(ValidationCode::DanglingRef, describe(e),
                 "unknown " + attr + " \"" + *value + "\" on " + e.name +
                     " " + describe(e));
        }
        for (const auto& child : e.children) check_refs(*child);
      };
  check_refs(root);
  if (!report.errors.empty()) return report;

  // stage 6: the model must contain at least two flow objects
  int flow_nodes = 0;
  std::function<void(const xml::Element&)> count_nodes =
      [&](const xml::Element& e) {
        if (e.ns != kBpmnModelNs) return;
        if (kFlowNodeElements.count(e.name)) {
          ++flow_nodes;
          return;  // subProcess contents stay opaque
        }
        for (const auto& child : e.children) count_nodes(*child);
      };
  count_nodes(root);
  if (flow_nodes < 2) {
    fail(ValidationCode::TooFewNodes, "definitions",
         "model contains " + std::to_string(flow_nodes) +
             " flow objects, at least 2 are required");
    return report;
  }

  report.valid = true;
  return report;
}

}  // namespace bef
