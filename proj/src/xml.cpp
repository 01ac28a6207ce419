#include "xml.hpp"

#include <cctype>

#include "seqpred/errors.hpp"

namespace seqpred::xml {

const Element* Element::first_child(const std::string& child_name) const {
    for (const auto& child : children) {
        if (child->name == child_name) return child.get();
    }
    return nullptr;
}

std::vector<const Element*> Element::children_named(const std::string& child_name) const {
    std::vector<const Element*> out;
    for (const auto& child : children) {
        if (child->name == child_name) out.push_back(child.get());
    }
    return out;
}

std::string Element::attribute(const std::string& attr_name) const {
    auto it = attributes.find(attr_name);
    return it == attributes.end() ? std::string() : it->second;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    std::unique_ptr<Element> parse_document() {
        skip_misc();
        auto root = parse_element();
        skip_misc();
        if (pos_ != text_.size()) fail("trailing content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw FormatError("xml: line " + std::to_string(line_) + ": " + message);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    char advance() {
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    bool consume(const std::string& token) {
        if (text_.compare(pos_, token.size(), token) != 0) return false;
        for (std::size_t i = 0; i < token.size(); ++i) advance();
        return true;
    }

    void skip_whitespace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    void skip_misc() {
        for (;;) {
            skip_whitespace();
            if (consume("<!--")) {
                while (!consume("-->")) advance();
            } else if (consume("<?")) {
                while (!consume("?>")) advance();
            } else if (consume("<!")) { // DOCTYPE and friends: skip to '>'
                while (peek() != '>') advance();
                advance();
            } else {
                return;
            }
        }
    }

    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
               c == ':';
    }

    std::string parse_name() {
        std::string name;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) name += advance();
        if (name.empty()) fail("expected a name");
        return name;
    }

    std::string decode_entity() {
        // called after '&'
        std::string entity;
        while (peek() != ';') entity += advance();
        advance();
        if (entity == "amp") return "&";
        if (entity == "lt") return "<";
        if (entity == "gt") return ">";
        if (entity == "quot") return "\"";
        if (entity == "apos") return "'";
        if (!entity.empty() && entity[0] == '#') {
            long code = std::strtol(entity.c_str() + (entity[1] == 'x' ? 2 : 1), nullptr,
                                    entity[1] == 'x' ? 16 : 10);
            if (code > 0 && code < 128) return std::string(1, static_cast<char>(code));
            fail("unsupported character reference &" + entity + ";");
        }
        fail("unknown entity &" + entity + ";");
    }

    std::string parse_attribute_value() {
        char quote = advance();
        if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
        std::string value;
        for (;;) {
            char c = advance();
            if (c == quote) break;
            if (c == '&') {
                value += decode_entity();
            } else {
                value += c;
            }
        }
        return value;
    }

    std::unique_ptr<Element> parse_element() {
        if (!consume("<")) fail("expected an element");
        auto element = std::make_unique<Element>();
        element->name = parse_name();
        for (;;) {
            skip_whitespace();
            if (consume("/>")) return element;
            if (consume(">")) break;
            std::string attr = parse_name();
            skip_whitespace();
            if (!consume("=")) fail("expected '=' after attribute " + attr);
            skip_whitespace();
            element->attributes[attr] = parse_attribute_value();
        }
        // content
        for (;;) {
            if (pos_ >= text_.size()) fail("unterminated element <" + element->name + ">");
            if (text_.compare(pos_, 4, "<!--") == 0) {
                consume("<!--");
                while (!consume("-->")) advance();
            } else if (text_.compare(pos_, 2, "</") == 0) {
                consume("</");
                std::string closing = parse_name();
                if (closing != element->name) {
                    fail("mismatched closing tag </" + closing + "> for <" + element->name + ">");
                }
                skip_whitespace();
                if (!consume(">")) fail("malformed closing tag");
                return element;
            } else if (peek() == '<') {
                element->children.push_back(parse_element());
            } else {
                char c = advance();
                element->text += (c == '&') ? decode_entity() : std::string(1, c);
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

} // namespace

std::unique_ptr<Element> parse(const std::string& text) {
    return Parser(text).parse_document();
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c; break;
        }
    }
    return out;
}

} // namespace seqpred::xml
