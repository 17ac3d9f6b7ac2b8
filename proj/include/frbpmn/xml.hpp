#pragma once

// Minimal namespace-aware XML tree reader (expat) and canonical writer.
//
// Canonical form: UTF-8, LF line endings, 2-space indentation, attributes
// sorted lexicographically by qualified name, empty elements self-closed.

#include <expat.h>

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "frbpmn/error.hpp"

namespace frbpmn::xml {

struct Element {
    std::string ns;     // namespace URI, empty when unqualified
    std::string local;  // local name
    std::vector<std::pair<std::string, std::string>> attributes;  // "uri|local" or "local"
    std::vector<Element> children;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;

    /// Attribute value by unqualified name, or by "uri|local" for namespaced ones.
    const std::string* attribute(std::string_view name) const {
        for (const auto& [k, v] : attributes)
            if (k == name) return &v;
        return nullptr;
    }

    std::string attribute_or(std::string_view name, std::string fallback = {}) const {
        const std::string* v = attribute(name);
        return v ? *v : fallback;
    }
};

namespace detail {

constexpr char kSep = '|';

struct ReaderState {
    std::vector<Element*> stack;
    std::unique_ptr<Element> root;
    XML_Parser parser = nullptr;
};

inline void split_name(const char* raw, std::string& ns, std::string& local) {
    std::string_view s(raw);
    auto pos = s.find(kSep);
    if (pos == std::string_view::npos) {
        ns.clear();
        local.assign(s);
    } else {
        ns.assign(s.substr(0, pos));
        local.assign(s.substr(pos + 1));
    }
}

inline void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<ReaderState*>(user);
    Element e;
    split_name(name, e.ns, e.local);
    e.line = XML_GetCurrentLineNumber(st->parser);
    e.column = XML_GetCurrentColumnNumber(st->parser) + 1;
    for (std::size_t i = 0; attrs[i]; i += 2) e.attributes.emplace_back(attrs[i], attrs[i + 1]);
    if (st->stack.empty()) {
        st->root = std::make_unique<Element>(std::move(e));
        st->stack.push_back(st->root.get());
    } else {
        auto& children = st->stack.back()->children;
        children.push_back(std::move(e));
        st->stack.push_back(&children.back());
    }
}

inline void XMLCALL on_end(void* user, const XML_Char*) {
    static_cast<ReaderState*>(user)->stack.pop_back();
}

inline void XMLCALL on_text(void* user, const XML_Char* s, int len) {
    auto* st = static_cast<ReaderState*>(user);
    if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

inline void escape(std::string& out, std::string_view s, bool attribute) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute)
                    out += "&quot;";
                else
                    out += c;
                break;
            case '\n':
                if (attribute)
                    out += "&#10;";
                else
                    out += c;
                break;
            case '\t':
                if (attribute)
                    out += "&#9;";
                else
                    out += c;
                break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
}

}  // namespace detail

/// Parses a whole document into a tree. Throws ParseError with the expat
/// message and position on malformed input.
inline Element parse(std::string_view bytes) {
    detail::ReaderState st;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreateNS("UTF-8", detail::kSep), &XML_ParserFree);
    if (!parser) throw Error("cannot allocate XML parser");
    st.parser = parser.get();
    XML_SetUserData(st.parser, &st);
    XML_SetElementHandler(st.parser, detail::on_start, detail::on_end);
    XML_SetCharacterDataHandler(st.parser, detail::on_text);
    if (XML_Parse(st.parser, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw ParseError(XML_ErrorString(XML_GetErrorCode(st.parser)),
                         XML_GetCurrentLineNumber(st.parser),
                         XML_GetCurrentColumnNumber(st.parser) + 1);
    }
    if (!st.root) throw ParseError("no root element", 1, 1);
    return std::move(*st.root);
}

/// Output-side element with qualified names.
struct Node {
    std::string name;
    std::map<std::string, std::string> attributes;  // sorted by qualified name
    std::vector<Node> children;
    std::string text;

    Node() = default;
    explicit Node(std::string n) : name(std::move(n)) {}

    Node& attr(std::string key, std::string value) {
        attributes[std::move(key)] = std::move(value);
        return *this;
    }

    Node& attr_if(std::string key, const std::string& value) {
        if (!value.empty()) attributes[std::move(key)] = value;
        return *this;
    }

    Node& add(Node child) {
        children.push_back(std::move(child));
        return children.back();
    }
};

inline void write(std::string& out, const Node& n, std::size_t depth) {
    out.append(depth * 2, ' ');
    out += '<';
    out += n.name;
    for (const auto& [k, v] : n.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        detail::escape(out, v, true);
        out += '"';
    }
    if (n.children.empty() && n.text.empty()) {
        out += "/>\n";
        return;
    }
    out += '>';
    if (n.children.empty()) {
        detail::escape(out, n.text, false);
    } else {
        out += '\n';
        for (const auto& c : n.children) write(out, c, depth + 1);
        out.append(depth * 2, ' ');
    }
    out += "</";
    out += n.name;
    out += ">\n";
}

inline std::string write_document(const Node& root) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write(out, root, 0);
    return out;
}

}  // namespace frbpmn::xml
