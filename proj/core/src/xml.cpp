#include "bef4llm/xml.hpp"

#include <expat.h>

#include <cstring>

namespace bef::xml {

namespace {

constexpr char kNsSep = '\n';

struct Builder {
  Document doc;
  std::vector<Element*> stack;
  XML_Parser parser = nullptr;
};

void split_name(const char* expat_name, std::string& ns, std::string& local) {
  const char* sep = std::strchr(expat_name, kNsSep);
  if (sep) {
    ns.assign(expat_name, sep - expat_name);
    local.assign(sep + 1);
  } else {
    ns.clear();
    local.assign(expat_name);
  }
}

void XMLCALL on_start(void* user, const char* name, const char** attrs) {
  auto* b = static_cast<Builder*>(user);
  auto elem = std::make_unique<Element>();
  split_name(name, elem->ns, elem->name);
  elem->line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attrs[i]; i += 2) {
    std::string ans, alocal;
    split_name(attrs[i], ans, alocal);
    elem->attributes[alocal] = attrs[i + 1];
  }
  Element* raw = elem.get();
  if (b->stack.empty()) {
    b->doc.root = std::move(elem);
  } else {
    b->stack.back()->children.push_back(std::move(elem));
  }
  b->stack.push_back(raw);
}

void XMLCALL on_end(void* user, const char*) {
  auto* b = static_cast<Builder*>(user);
  if (!b->stack.empty()) b->stack.pop_back();
}

void XMLCALL on_text(void* user, const char* data, int len) {
  auto* b = static_cast<Builder*>(user);
  if (!b->stack.empty()) b->stack.back()->text.append(data, len);
}

}  // namespace

const Element* Element::child(const std::string& local,
                              const std::string& ns_uri) const {
  for (const auto& c : children) {
    if (c->name == local && (ns_uri.empty() || c->ns == ns_uri)) return c.get();
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(
    const std::string& local, const std::string& ns_uri) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c->name == local && (ns_uri.empty() || c->ns == ns_uri))
      out.push_back(c.get());
  }
  return out;
}

Document parse(const std::string& text) {
  Builder b;
  XML_Parser parser = XML_ParserCreateNS("UTF-8", kNsSep);
  b.parser = parser;
  XML_SetUserData(parser, &b);
  XML_SetElementHandler(parser, on_start, on_end);
  XML_SetCharacterDataHandler(parser, on_text);

  const XML_Status status = XML_Parse(
      parser, text.data(), static_cast<int>(text.size()), /*isFinal=*/1);
  if (status != XML_STATUS_OK) {
    ParseError err;
    err.message = XML_ErrorString(XML_GetErrorCode(parser));
    err.line = static_cast<int>(XML_GetCurrentLineNumber(parser));
    err.column = static_cast<int>(XML_GetCurrentColumnNumber(parser));
    b.doc.root.reset();
    b.doc.error = std::move(err);
  } else if (!b.doc.root) {
    b.doc.error = ParseError{"no root element", 0, 0};
  }
  XML_ParserFree(parser);
  return std::move(b.doc);
}

}  // namespace bef::xml
