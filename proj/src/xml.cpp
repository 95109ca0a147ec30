#include "evidencer/xml.hpp"

#include <cctype>

namespace evidencer::xml {

namespace {

class Parser {
public:
    explicit Parser(const std::string& input) : s_(input) {}

    Node parse_document() {
        skip_misc();
        if (eof()) throw err("document has no root element");
        Node root = parse_element();
        skip_misc();
        if (!eof()) throw err("trailing content after root element");
        return root;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    bool starts_with(const char* lit) const { return s_.compare(pos_, std::char_traits<char>::length(lit), lit) == 0; }

    Error err(const std::string& msg) const {
        return Error(ErrorKind::ParseError, "xml: " + msg + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    // Whitespace, comments, PIs and DOCTYPE between markup.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                auto end = s_.find("-->", pos_ + 4);
                if (end == std::string::npos) throw err("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                auto end = s_.find("?>", pos_ + 2);
                if (end == std::string::npos) throw err("unterminated processing instruction");
                pos_ = end + 2;
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        pos_ += 9;  // past "<!DOCTYPE"; bracket depth covers an internal subset
        int depth = 0;
        while (!eof()) {
            char c = s_[pos_++];
            if (c == '<') ++depth;
            else if (c == '>') {
                if (depth == 0) return;
                --depth;
            }
        }
        throw err("unterminated DOCTYPE");
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == ':' || c == '.')
                ++pos_;
            else
                break;
        }
        if (pos_ == start) throw err("expected a name");
        return s_.substr(start, pos_ - start);
    }

    std::string decode_entities(const std::string& raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out += raw[i++];
                continue;
            }
            auto semi = raw.find(';', i + 1);
            if (semi == std::string::npos) throw err("unterminated entity reference");
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out += '&';
            else if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                long code = 0;
                try {
                    code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                               ? std::stol(ent.substr(2), nullptr, 16)
                               : std::stol(ent.substr(1), nullptr, 10);
                } catch (const std::exception&) {
                    throw err("bad character reference &" + ent + ";");
                }
                append_utf8(out, static_cast<unsigned long>(code));
            } else {
                throw err("unknown entity &" + ent + ";");
            }
            i = semi + 1;
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned long cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    Node parse_element() {
        if (eof() || peek() != '<') throw err("expected '<'");
        ++pos_;
        Node node;
        node.name = parse_name();

        for (;;) {
            skip_ws();
            if (eof()) throw err("unterminated start tag <" + node.name);
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return node;
            }
            std::string key = parse_name();
            skip_ws();
            if (eof() || peek() != '=') throw err("expected '=' in attribute " + key);
            ++pos_;
            skip_ws();
            if (eof() || (peek() != '"' && peek() != '\'')) throw err("expected quoted attribute value");
            char quote = s_[pos_++];
            auto end = s_.find(quote, pos_);
            if (end == std::string::npos) throw err("unterminated attribute value");
            node.attrs.emplace_back(key, decode_entities(s_.substr(pos_, end - pos_)));
            pos_ = end + 1;
        }

        // Content until the matching end tag.
        for (;;) {
            if (eof()) throw err("missing </" + node.name + ">");
            if (starts_with("</")) {
                pos_ += 2;
                std::string closing = parse_name();
                if (closing != node.name)
                    throw err("mismatched </" + closing + ">, expected </" + node.name + ">");
                skip_ws();
                if (eof() || peek() != '>') throw err("malformed end tag");
                ++pos_;
                return node;
            }
            if (starts_with("<!--")) {
                auto end = s_.find("-->", pos_ + 4);
                if (end == std::string::npos) throw err("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("<![CDATA[")) {
                auto end = s_.find("]]>", pos_ + 9);
                if (end == std::string::npos) throw err("unterminated CDATA section");
                node.gaps.back().append(s_, pos_ + 9, end - pos_ - 9);
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                auto end = s_.find("?>", pos_ + 2);
                if (end == std::string::npos) throw err("unterminated processing instruction");
                pos_ = end + 2;
            } else if (peek() == '<') {
                node.children.push_back(parse_element());
                node.gaps.emplace_back();
            } else {
                std::size_t start = pos_;
                while (!eof() && peek() != '<') ++pos_;
                node.gaps.back() += decode_entities(s_.substr(start, pos_ - start));
            }
        }
    }
};

}  // namespace

const Node* Node::child(const std::string& child_name) const {
    for (const auto& c : children)
        if (c.name == child_name) return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(const std::string& child_name) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
        if (c.name == child_name) out.push_back(&c);
    return out;
}

const Node* Node::find(const std::string& path) const {
    const Node* cur = this;
    std::size_t pos = 0;
    while (cur && pos <= path.size()) {
        auto next = path.find('/', pos);
        std::string part = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        cur = cur->child(part);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return cur;
}

std::string Node::attr(const std::string& key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return v;
    return {};
}

std::string Node::text() const {
    std::string out;
    for (const auto& g : gaps) out += g;
    return out;
}

std::string Node::text_content() const {
    std::string out = gaps[0];
    for (std::size_t i = 0; i < children.size(); ++i) {
        out += children[i].text_content();
        out += gaps[i + 1];
    }
    return out;
}

Node parse(const std::string& input) { return Parser(input).parse_document(); }

}  // namespace evidencer::xml
