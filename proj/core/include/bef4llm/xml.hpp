#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bef::xml {

// Minimal DOM built on top of expat. Element names are stored as
// (namespace_uri, local_name); attributes keep their raw names since BPMN
// interchange attributes are unprefixed.
struct Element {
  std::string ns;
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;
  int line = 0;

  const std::string* attr(const std::string& key) const {
    auto it = attributes.find(key);
    return it == attributes.end() ? nullptr : &it->second;
  }

  // First child with the given local name (any namespace when ns empty).
  const Element* child(const std::string& local,
                       const std::string& ns_uri = "") const;
  std::vector<const Element*> children_named(
      const std::string& local, const std::string& ns_uri = "") const;
};

struct ParseError {
  std::string message;
  int line = 0;
  int column = 0;
};

struct Document {
  std::unique_ptr<Element> root;
  std::optional<ParseError> error;

  bool ok() const { return root != nullptr && !error; }
};

// Parses a UTF-8 XML document. On syntax errors the returned document has
// no root and carries the expat diagnostic.
Document parse(const std::string& text);

}  // namespace bef::xml
