#pragma once

#include <string>
#include <vector>

#include "evidencer/errors.hpp"

namespace evidencer::xml {

// Just enough XML for E-utilities responses: elements, attributes, text with
// entity references, comments, CDATA, DOCTYPE and processing instructions
// skipped. Not a validating parser.
struct Node {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Node> children;
    // gaps[i] is the character data before children[i]; gaps.back() is the
    // trailing data. Always children.size() + 1 entries. Keeping the gaps
    // preserves document order around inline markup (<i>, <sub>, ...).
    std::vector<std::string> gaps{""};

    const Node* child(const std::string& child_name) const;
    std::vector<const Node*> children_named(const std::string& child_name) const;
    // First descendant matching a '/'-separated path of child names.
    const Node* find(const std::string& path) const;
    std::string attr(const std::string& key) const;
    // Direct character data only.
    std::string text() const;
    // Character data of this node and all descendants, in document order.
    std::string text_content() const;
};

// Parses a document and returns its root element. Throws ParseError.
Node parse(const std::string& input);

}  // namespace evidencer::xml
