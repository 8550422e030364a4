// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cctype>
#include <set>

#include "beepl/frontend.hpp"

namespace beepl {

namespace {

const std::set<std::string, std::less<>>& keywords() {
    static const std::set<std::string, std::less<>> kw = {
        "fun",   "extern", "let",   "in",     "if",    "then",   "else",   "match",  "with",  "for",
        "Up",    "Down",   "ref",   "not",    "true",  "false",  "none",   "some",   "pnone", "psome",
        "struct", "option", "unit", "bytes",  "map",   "bool",   "char",   "int",    "int8",  "uint8",
        "int16", "uint16", "int32", "uint32", "uint",  "long",   "ulong",  "int64",  "uint64", "#section",
    };
    return kw;
}

// Longest first.
constexpr std::array<std::string_view, 31> kPuncts = {
    "...", "==", "!=", "<=", ">=", "<<", ">>", "&&", "||", ":=", "=>", "(", ")", "{", "}", "[",
    "]",   ",",  ";",  ":",  ".",  "=",  "<",  ">",  "+",  "-",  "*",  "/",  "%",  "&",  "|",
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

const std::set<std::string, std::less<>> kSuffixes = {"",   "i8", "u8", "i16", "u16", "i32", "u32", "u",
                                                      "U",  "L",  "l",  "UL",  "ul",  "LU",  "lu"};

class Lexer {
  public:
    explicit Lexer(std::string_view s) : src_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        return out;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[nodiscard]] Span here() const { return Span{line_, col_, pos_, pos_}; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    [[nodiscard]] char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    [[noreturn]] void fail(const std::string& msg, Span sp) const { throw CompileError("LexError", msg, sp); }

    void skip_space() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
            if (peek() == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
                continue;
            }
            if (peek() == '/' && peek(1) == '*') {
                const Span start = here();
                advance(2);
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                if (pos_ >= src_.size()) fail("unterminated comment", start);
                advance(2);
                continue;
            }
            return;
        }
    }

    Token next() {
        Token t;
        t.span = here();
        const char c = peek();
        if (c == '#') {
            advance();
            std::size_t b = pos_;
            while (is_ident_char(peek())) advance();
            std::string word = "#" + std::string(src_.substr(b, pos_ - b));
            if (word != "#section") fail("unknown directive '" + word + "'", t.span);
            t.kind = Token::Kind::Keyword;
            t.lexeme = word;
        } else if (is_ident_start(c)) {
            std::size_t b = pos_;
            while (is_ident_char(peek())) advance();
            t.lexeme = std::string(src_.substr(b, pos_ - b));
            t.kind = keywords().count(t.lexeme) ? Token::Kind::Keyword : Token::Kind::Ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(t);
        } else if (c == '"') {
            lex_string(t);
        } else {
            bool matched = false;
            for (auto p : kPuncts) {
                if (src_.substr(pos_, p.size()) == p) {
                    t.kind = Token::Kind::Punct;
                    t.lexeme = std::string(p);
                    advance(p.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (c == '!' || c == '~' || c == '^') {
                    t.kind = Token::Kind::Punct;
                    t.lexeme = std::string(1, c);
                    advance();
                } else {
                    fail(std::string("illegal character '") + c + "'", t.span);
                }
            }
        }
        t.span.end = pos_;
        return t;
    }

    void lex_number(Token& t) {
        const std::size_t b = pos_;
        int base = 10;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            base = 16;
            advance(2);
        }
        const std::size_t digits_begin = pos_;
        uint64_t v = 0;
        bool overflow = false;
        for (;;) {
            const char d = peek();
            int dv;
            if (std::isdigit(static_cast<unsigned char>(d)))
                dv = d - '0';
            else if (base == 16 && std::isxdigit(static_cast<unsigned char>(d)))
                dv = std::tolower(static_cast<unsigned char>(d)) - 'a' + 10;
            else
                break;
            const auto ub = static_cast<uint64_t>(base);
            const auto ud = static_cast<uint64_t>(dv);
            if (v > (UINT64_MAX - ud) / ub) overflow = true;
            else v = v * ub + ud;
            advance();
        }
        if (pos_ == digits_begin) fail("malformed integer literal", t.span);
        const std::size_t sb = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek()))) advance();
        t.suffix = std::string(src_.substr(sb, pos_ - sb));
        if (!kSuffixes.count(t.suffix)) fail("unknown integer suffix '" + t.suffix + "'", t.span);
        if (overflow) fail("integer literal does not fit in 64 bits", t.span);
        t.kind = Token::Kind::Int;
        t.lexeme = std::string(src_.substr(b, pos_ - b));
        t.int_value = v;
        const bool long_suffix = t.suffix.find_first_of("Ll") != std::string::npos;
        t.is_long = long_suffix || t.int_value > static_cast<uint64_t>(INT32_MAX);
    }

    void lex_string(Token& t) {
        advance();
        std::string s;
        for (;;) {
            if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal", t.span);
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                const char e = peek();
                switch (e) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case '0': s += '\0'; break;
                case '\\': s += '\\'; break;
                case '"': s += '"'; break;
                default: fail(std::string("unknown escape '\\") + e + "'", here());
                }
                advance();
                continue;
            }
            s += c;
            advance();
        }
        t.kind = Token::Kind::String;
        t.lexeme = s;
    }
};

} // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

} // namespace beepl
