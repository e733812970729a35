#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "specrw/common/result.hpp"
#include "specrw/graph/labeled_graph.hpp"

namespace specrw::graph {

struct HostParseError {
    int line = 1;
    int col = 1;
    std::string message;

    std::string to_string() const {
        return "host graph parse error at " + std::to_string(line) + ":" + std::to_string(col) +
               ": " + message;
    }
};

namespace detail {

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string atom_text(const Atom& a) {
    return is_int(a) ? std::to_string(as_int(a)) : quote(as_str(a));
}

class HostLexer {
public:
    HostLexer(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (i_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[i_])))
            step();
    }

    bool at_end() {
        skip_ws();
        return i_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return i_ < text_.size() ? text_[i_] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (i_ < text_.size() && text_[i_] == c) {
            step();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    long long read_int() {
        skip_ws();
        bool neg = false;
        if (i_ < text_.size() && text_[i_] == '-') {
            neg = true;
            step();
        }
        if (i_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[i_])))
            fail("expected an integer");
        long long v = 0;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
            v = v * 10 + (text_[i_] - '0');
            step();
        }
        return neg ? -v : v;
    }

    std::string read_string() {
        skip_ws();
        if (i_ >= text_.size() || text_[i_] != '"') fail("expected a string");
        step();
        std::string s;
        while (i_ < text_.size() && text_[i_] != '"') {
            char c = text_[i_];
            if (c == '\\' && i_ + 1 < text_.size()) {
                step();
                c = text_[i_];
            }
            s += c;
            step();
        }
        if (i_ >= text_.size()) fail("unterminated string");
        step();
        return s;
    }

    std::string read_word() {
        skip_ws();
        std::string s;
        while (i_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) {
            s += text_[i_];
            step();
        }
        if (s.empty()) fail("expected a word");
        return s;
    }

    Atom read_atom() {
        skip_ws();
        if (i_ < text_.size() && text_[i_] == '"') return str_atom(read_string());
        return int_atom(read_int());
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw HostParseError{line_, col_, msg};
    }

private:
    void step() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

/// Textual GP2-style host graph:
///   [ (id, label[# mark]) ... | (id, src, tgt, label) ... ]
/// String atoms are quoted, integer atoms bare; nodes and edges are listed in
/// id order, one per line.
inline std::string write_host_graph(const LabeledGraph& g) {
    std::ostringstream os;
    os << "[\n";
    for (const auto& [id, n] : g.nodes()) {
        os << "  (" << id << ", " << detail::atom_text(n.label);
        if (n.mark == Mark::Red) os << " # red";
        os << ")\n";
    }
    os << "  |\n";
    for (const auto& [id, e] : g.edges()) {
        os << "  (" << id << ", " << e.src << ", " << e.tgt << ", " << detail::atom_text(e.label)
           << ")\n";
    }
    os << "]\n";
    return os.str();
}

inline Result<LabeledGraph, HostParseError> read_host_graph(const std::string& text) {
    detail::HostLexer lx(text);
    LabeledGraph g;
    try {
        lx.expect('[');
        while (lx.peek() == '(') {
            lx.expect('(');
            long long id = lx.read_int();
            lx.expect(',');
            Atom label = lx.read_atom();
            Mark mark = Mark::None;
            if (lx.accept('#')) {
                std::string word = lx.read_word();
                if (word != "red") lx.fail("unknown mark '" + word + "'");
                mark = Mark::Red;
            }
            lx.expect(')');
            if (g.has_node(static_cast<int>(id))) lx.fail("duplicate node id " + std::to_string(id));
            g.add_node_with_id(static_cast<int>(id), std::move(label), mark);
        }
        lx.expect('|');
        while (lx.peek() == '(') {
            lx.expect('(');
            long long id = lx.read_int();
            lx.expect(',');
            long long src = lx.read_int();
            lx.expect(',');
            long long tgt = lx.read_int();
            lx.expect(',');
            Atom label = lx.read_atom();
            lx.expect(')');
            if (g.has_edge(static_cast<int>(id))) lx.fail("duplicate edge id " + std::to_string(id));
            if (!g.has_node(static_cast<int>(src)) || !g.has_node(static_cast<int>(tgt)))
                lx.fail("edge " + std::to_string(id) + " references a missing node");
            g.add_edge_with_id(static_cast<int>(id), static_cast<int>(src), static_cast<int>(tgt),
                               std::move(label));
        }
        lx.expect(']');
        if (!lx.at_end()) lx.fail("trailing input after graph");
    } catch (HostParseError& e) {
        return e;
    }
    return g;
}

} // namespace specrw::graph
