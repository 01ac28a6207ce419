#pragma once

// Minimal XML reader for the PNML subset: elements, attributes, text, the
// five predefined entities, comments and processing instructions. No
// namespaces, no DTDs, no CDATA.

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace seqpred::xml {

struct Element {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<std::unique_ptr<Element>> children;
    std::string text; // concatenated character data directly inside this element

    const Element* first_child(const std::string& child_name) const;
    std::vector<const Element*> children_named(const std::string& child_name) const;
    std::string attribute(const std::string& attr_name) const; // "" when absent
};

/// Parses a document and returns its root element. Throws FormatError with a
/// line number on malformed input.
std::unique_ptr<Element> parse(const std::string& text);

/// Escapes &, <, >, " and ' for attribute/text emission.
std::string escape(const std::string& text);

} // namespace seqpred::xml
