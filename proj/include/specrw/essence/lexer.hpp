#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace specrw::essence {

struct Token {
    enum class Kind {
        Ident,
        Int,
        Symbol, // one of the fixed operator/punctuation spellings
        End,
    };

    Kind kind = Kind::End;
    std::string text;
    long long int_value = 0;
    int line = 1;
    int col = 1;

    bool is(Kind k, const std::string& t) const { return kind == k && text == t; }
    bool is_symbol(const std::string& t) const { return is(Kind::Symbol, t); }
    bool is_ident(const std::string& t) const { return is(Kind::Ident, t); }
};

struct LexError {
    int line = 1;
    int col = 1;
    std::string message;
};

/// A `$` comment line, recorded with the index of the token that follows it.
struct CommentLine {
    std::size_t next_token = 0;
    std::string text; // includes the leading '$'
};

struct TokenStream {
    std::vector<Token> tokens;
    std::vector<CommentLine> comments;
    bool failed = false;
    LexError error;
};

/// Tokenizes Essence-subset text. Comments run from `$` to end of line and are
/// collected separately with their position relative to the token stream.
inline TokenStream lex(const std::string& text) {
    TokenStream out;
    std::size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i < text.size() && text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    static const char* symbols[] = {
        "-->", "->", "..", "!=", "/\\", "(", ")", "{", "}", "[", "]",
        ",",   ":",  ".",  "=",  "!",   "+", "-", "*", ";",
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '$') {
            std::size_t j = text.find('\n', i);
            std::string comment = text.substr(i, (j == std::string::npos ? text.size() : j) - i);
            while (!comment.empty() && (comment.back() == '\r')) comment.pop_back();
            out.comments.push_back({out.tokens.size(), comment});
            advance(comment.size());
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Token t;
            t.kind = Token::Kind::Int;
            t.line = line;
            t.col = col;
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.text = text.substr(i, j - i);
            t.int_value = std::stoll(t.text);
            out.tokens.push_back(t);
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            Token t;
            t.kind = Token::Kind::Ident;
            t.line = line;
            t.col = col;
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                    text[j] == '\'')) {
                ++j;
            }
            t.text = text.substr(i, j - i);
            out.tokens.push_back(t);
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* s : symbols) {
            std::size_t len = std::char_traits<char>::length(s);
            if (text.compare(i, len, s) == 0) {
                Token t;
                t.kind = Token::Kind::Symbol;
                t.text = s;
                t.line = line;
                t.col = col;
                out.tokens.push_back(t);
                advance(len);
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.failed = true;
            out.error = {line, col, std::string("unexpected character '") + c + "'"};
            return out;
        }
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    out.tokens.push_back(end);
    return out;
}

} // namespace specrw::essence
