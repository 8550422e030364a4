// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <functional>

#include "beepl/frontend.hpp"

namespace beepl {

PrimTy default_literal_type(int64_t value, bool magnitude_exceeds_int64) {
    if (magnitude_exceeds_int64) return PrimTy::long_(Sign::Unsigned);
    if (value >= INT32_MIN && value <= INT32_MAX) return PrimTy::int32();
    return PrimTy::int64();
}

namespace {

std::optional<PrimTy> suffix_type(const std::string& s) {
    if (s == "i8") return PrimTy::int_(8);
    if (s == "u8") return PrimTy::int_(8, Sign::Unsigned);
    if (s == "i16") return PrimTy::int_(16);
    if (s == "u16") return PrimTy::int_(16, Sign::Unsigned);
    if (s == "i32") return PrimTy::int_(32);
    if (s == "u32" || s == "u" || s == "U") return PrimTy::int_(32, Sign::Unsigned);
    if (s == "L" || s == "l") return PrimTy::long_();
    if (s == "UL" || s == "ul" || s == "LU" || s == "lu") return PrimTy::long_(Sign::Unsigned);
    return std::nullopt;
}

bool fits(const PrimTy& p, bool negative, uint64_t magnitude) {
    if (negative) {
        if (!p.is_signed()) return magnitude == 0;
        return magnitude <= static_cast<uint64_t>(-(p.min_value() + 1)) + 1;
    }
    return magnitude <= p.max_value();
}

class Parser {
  public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {
        Token eof;
        eof.kind = Token::Kind::Eof;
        eof.lexeme = "<eof>";
        if (!toks_.empty()) {
            eof.span = toks_.back().span;
            eof.span.begin = eof.span.end;
        } else {
            eof.span = Span{1, 1, 0, 0};
        }
        toks_.push_back(eof);
    }

    Program program() {
        Program p;
        std::optional<std::string> pending_section;
        while (!at_eof()) {
            if (accept_kw("#section")) {
                pending_section = expect_string();
                continue;
            }
            const Span sp = peek().span;
            if (accept_kw("fun")) {
                FunDecl f = fun_decl(sp);
                if (pending_section) f.sec = std::exchange(pending_section, std::nullopt);
                f.flag = f.sec.has_value();
                p.decls.emplace_back(std::move(f));
            } else if (accept_kw("extern")) {
                p.decls.emplace_back(ext_decl(sp));
            } else if (is_kw("struct") && peek(1).lexeme == "{" && peek(1).kind == Token::Kind::Punct) {
                GlobDecl g = map_decl(sp);
                if (!g.sec && pending_section) g.sec = std::exchange(pending_section, std::nullopt);
                p.decls.emplace_back(std::move(g));
            } else if (is_kw("struct") && peek(1).kind == Token::Kind::Ident && peek(2).lexeme == "{") {
                p.composites.push_back(composite());
            } else {
                GlobDecl g = glob_decl(sp);
                if (!g.sec && pending_section) g.sec = std::exchange(pending_section, std::nullopt);
                p.decls.emplace_back(std::move(g));
            }
        }
        return p;
    }

    ExprPtr whole_expr() {
        auto e = expr();
        if (!at_eof()) fail("unexpected '" + peek().lexeme + "' after expression");
        return e;
    }

    Ty whole_type() {
        auto t = type();
        if (!at_eof()) fail("unexpected '" + peek().lexeme + "' after type");
        return t;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    // Depth of enclosing match arms not shielded by brackets; `|` then ends an arm body.
    int arm_depth_ = 0;

    [[nodiscard]] const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    [[nodiscard]] bool at_eof() const { return peek().kind == Token::Kind::Eof; }
    const Token& take() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek().span); }
    [[noreturn]] static void fail_at(const std::string& msg, Span sp) { throw CompileError("ParseError", msg, sp); }

    [[nodiscard]] bool is_kw(std::string_view k) const {
        return peek().kind == Token::Kind::Keyword && peek().lexeme == k;
    }
    [[nodiscard]] bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Punct && peek(k).lexeme == p;
    }
    bool accept_kw(std::string_view k) {
        if (!is_kw(k)) return false;
        take();
        return true;
    }
    bool accept(std::string_view p) {
        if (!is_punct(p)) return false;
        take();
        return true;
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "' but found '" + peek().lexeme + "'");
    }
    void expect_kw(std::string_view k) {
        if (!accept_kw(k)) fail("expected '" + std::string(k) + "' but found '" + peek().lexeme + "'");
    }
    std::string expect_ident() {
        if (peek().kind != Token::Kind::Ident) fail("expected identifier but found '" + peek().lexeme + "'");
        const Token& t = take();
        if (t.lexeme.rfind("__bpl_", 0) == 0)
            throw CompileError("ReservedIdentifier", "identifiers starting with __bpl_ are reserved", t.span);
        return t.lexeme;
    }
    std::string expect_string() {
        if (peek().kind != Token::Kind::String) fail("expected string literal but found '" + peek().lexeme + "'");
        return take().lexeme;
    }
    uint64_t expect_int() {
        if (peek().kind != Token::Kind::Int) fail("expected integer literal but found '" + peek().lexeme + "'");
        return take().int_value;
    }

    // ------------------------------------------------------------ types

    [[nodiscard]] bool at_type_start(std::size_t k = 0) const {
        const Token& t = peek(k);
        if (t.kind != Token::Kind::Keyword) return false;
        return prim_from_name(t.lexeme).has_value() || t.lexeme == "struct" || t.lexeme == "option" ||
               t.lexeme == "unit" || t.lexeme == "bytes" || t.lexeme == "map";
    }

    Ty type() {
        Ty t = base_type();
        while (accept("*")) t = Ty::ref(t);
        return t;
    }

    Ty base_type() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Keyword) fail("expected a type but found '" + t.lexeme + "'");
        if (auto p = prim_from_name(t.lexeme)) {
            take();
            return Ty::prim(*p);
        }
        if (accept_kw("unit")) return Ty::unit();
        if (accept_kw("bytes")) return Ty::bytes();
        if (accept_kw("map")) return Ty::struct_("bpf_map");
        if (accept_kw("struct")) return Ty::struct_(expect_ident());
        if (accept_kw("option")) {
            expect("(");
            Ty inner = type();
            expect(")");
            return Ty::option(inner);
        }
        fail("expected a type but found '" + t.lexeme + "'");
    }

    Effect effect() {
        Effect e;
        expect("<");
        if (accept(">")) return e;
        for (;;) {
            const Token& t = take();
            auto a = effect_atom_from_string(t.lexeme);
            if (!a) fail_at("unknown effect '" + t.lexeme + "'", t.span);
            e.items.push_back(*a);
            if (accept(">")) break;
            expect(",");
        }
        return e;
    }

    // ------------------------------------------------------------ declarations

    FunDecl fun_decl(Span sp) {
        FunDecl f;
        f.span = sp;
        f.name = expect_ident();
        expect("(");
        if (!accept(")")) {
            for (;;) {
                Ty t = type();
                std::string x = expect_ident();
                f.args.emplace_back(std::move(x), std::move(t));
                if (accept(")")) break;
                expect(",");
            }
        }
        expect(":");
        f.rt = type();
        if (accept(",")) f.ef = effect();
        expect("{");
        const int saved = std::exchange(arm_depth_, 0);
        f.body = expr();
        arm_depth_ = saved;
        accept(";");
        expect("}");
        return f;
    }

    ExtDecl ext_decl(Span sp) {
        ExtDecl d;
        d.span = sp;
        expect_kw("fun");
        d.name = expect_ident();
        expect("(");
        if (!accept(")")) {
            for (;;) {
                d.args.push_back(type());
                if (peek().kind == Token::Kind::Ident) take();
                if (accept(")")) break;
                expect(",");
            }
        }
        expect(":");
        d.ret = type();
        if (accept(",")) d.ef = effect();
        expect(";");
        return d;
    }

    std::optional<std::string> postfix_section() {
        if (accept_kw("#section")) return expect_string();
        return std::nullopt;
    }

    GlobDecl map_decl(Span sp) {
        GlobDecl g;
        g.span = sp;
        expect_kw("struct");
        expect("{");
        expect("...");
        expect("}");
        g.name = expect_ident();
        g.ty = Ty::ref(Ty::struct_("bpf_map"));
        g.is_map = true;
        g.sec = postfix_section();
        accept(";");
        return g;
    }

    Composite composite() {
        Composite c;
        expect_kw("struct");
        c.id = expect_ident();
        expect("{");
        while (!accept("}")) {
            Ty t = type();
            std::string f = expect_ident();
            if (accept("[")) {
                if (!t.is_prim()) fail("array fields must have a primitive element type");
                const uint64_t n = expect_int();
                expect("]");
                t = Ty::array(t.prim(), n);
            }
            expect(";");
            c.fields.push_back({std::move(f), std::move(t)});
        }
        accept(";");
        return c;
    }

    GlobDecl glob_decl(Span sp) {
        GlobDecl g;
        g.span = sp;
        if (!at_type_start()) fail("expected a declaration but found '" + peek().lexeme + "'");
        g.ty = type();
        g.name = expect_ident();
        bool is_array = false;
        std::optional<uint64_t> array_len;
        if (accept("[")) {
            is_array = true;
            if (peek().kind == Token::Kind::Int) array_len = expect_int();
            expect("]");
        }
        g.sec = postfix_section();
        if (accept("=")) {
            const Token& t = peek();
            if (t.kind == Token::Kind::String) {
                g.init = take().lexeme;
            } else if (accept_kw("true")) {
                g.init = true;
            } else if (accept_kw("false")) {
                g.init = false;
            } else {
                const bool neg = accept("-");
                const uint64_t m = expect_int();
                g.init = neg ? -static_cast<int64_t>(m) : static_cast<int64_t>(m);
            }
        }
        expect(";");
        if (is_array) {
            if (!g.ty.is_prim()) fail_at("array globals must have a primitive element type", sp);
            uint64_t n = array_len.value_or(0);
            if (auto* s = std::get_if<std::string>(&g.init)) n = std::max<uint64_t>(n, s->size() + 1);
            if (n == 0) fail_at("array global needs a length or an initializer", sp);
            g.ty = Ty::array(g.ty.prim(), n);
        }
        return g;
    }

    // ------------------------------------------------------------ expressions

    ExprPtr expr() {
        const Span sp = peek().span;
        if (accept_kw("let")) return let_expr(sp);
        if (accept_kw("if")) return if_expr(sp);
        if (accept_kw("match")) return match_expr(sp);
        return assign_expr();
    }

    ExprPtr let_expr(Span sp) {
        std::string x = expect_ident();
        std::optional<Ty> t;
        if (accept(":")) t = type();
        expect("=");
        auto bound = expr();
        expect_kw("in");
        auto body = expr();
        return mk::let(std::move(x), std::move(t), std::move(bound), std::move(body), sp);
    }

    ExprPtr if_expr(Span sp) {
        auto g = expr();
        expect_kw("then");
        auto t = expr();
        expect_kw("else");
        auto e = expr();
        return mk::cond(std::move(g), std::move(t), std::move(e), sp);
    }

    ExprPtr match_expr(Span sp) {
        auto scrut = expr();
        expect_kw("with");
        std::vector<Arm> arms;
        bool first = true;
        while (is_punct("|") || first) {
            if (!accept("|") && first && !at_pattern_start()) fail("expected a match arm");
            first = false;
            Arm a;
            a.pat = pattern();
            expect("=>");
            ++arm_depth_;
            a.body = expr();
            --arm_depth_;
            arms.push_back(std::move(a));
        }
        return mk::match(std::move(scrut), std::move(arms), sp);
    }

    [[nodiscard]] bool at_pattern_start(std::size_t k = 0) const {
        const Token& t = peek(k);
        if (t.kind == Token::Kind::Keyword) return t.lexeme == "pnone" || t.lexeme == "psome";
        if (t.kind == Token::Kind::Ident) return t.lexeme == "_" || is_punct(",", k + 1);
        return false;
    }

    Pattern pattern() {
        Pattern p;
        if (accept_kw("pnone")) {
            p.kind = Pattern::Kind::None;
            return p;
        }
        if (accept_kw("psome")) {
            p.kind = Pattern::Kind::Some;
            p.binder = expect_ident();
            return p;
        }
        if (peek().kind == Token::Kind::Ident && peek().lexeme == "_") {
            take();
            p.kind = Pattern::Kind::Wild;
            return p;
        }
        p.kind = Pattern::Kind::Bytes;
        p.binder = expect_ident();
        expect(",");
        p.target = type();
        if (accept(":")) {
            for (;;) {
                expect("(");
                std::string f = expect_ident();
                expect(",");
                Ty t = type();
                expect(")");
                p.fields.push_back({std::move(f), std::move(t)});
                if (!(is_punct(",") && is_punct("(", 1))) break;
                take();
            }
        }
        return p;
    }

    ExprPtr assign_expr() {
        auto lhs = binary(0);
        if (is_punct(":=")) {
            const Span sp = take().span;
            auto rhs = expr();
            return mk::assign(std::move(lhs), std::move(rhs), sp);
        }
        return lhs;
    }

    struct Level {
        std::vector<std::pair<std::string_view, BinOp>> ops;
    };

    static const std::vector<Level>& levels() {
        static const std::vector<Level> lv = {
            {{{"||", BinOp::LOr}}},
            {{{"&&", BinOp::LAnd}}},
            {{{"|", BinOp::Or}}},
            {{{"^", BinOp::Xor}}},
            {{{"&", BinOp::And}}},
            {{{"==", BinOp::Eq}, {"!=", BinOp::Ne}}},
            {{{"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}}},
            {{{"<<", BinOp::Shl}, {">>", BinOp::Shr}}},
            {{{"+", BinOp::Add}, {"-", BinOp::Sub}}},
            {{{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod}}},
        };
        return lv;
    }

    ExprPtr binary(std::size_t level) {
        if (level >= levels().size()) return unary();
        auto lhs = binary(level + 1);
        for (;;) {
            const Token& t = peek();
            if (t.kind != Token::Kind::Punct) return lhs;
            std::optional<BinOp> op;
            for (auto& [s, o] : levels()[level].ops)
                if (t.lexeme == s) op = o;
            if (!op) return lhs;
            if (*op == BinOp::Or && arm_depth_ > 0 && at_pattern_start(1)) return lhs;
            const Span sp = take().span;
            auto rhs = binary(level + 1);
            lhs = mk::bop(*op, std::move(lhs), std::move(rhs), sp);
        }
    }

    ExprPtr literal_from(const Token& t, bool negative, Span sp) {
        if (auto st = suffix_type(t.suffix)) {
            if (!fits(*st, negative, t.int_value))
                throw CompileError("LiteralOutOfRange", "literal '" + t.lexeme + "' does not fit in " + to_string(*st),
                                   sp);
            const uint64_t raw = negative ? (~t.int_value + 1) : t.int_value;
            return mk::int_lit(static_cast<int64_t>(raw), *st, false, sp);
        }
        if (negative) {
            if (t.int_value > static_cast<uint64_t>(INT64_MAX) + 1)
                throw CompileError("LiteralOutOfRange", "literal '-" + t.lexeme + "' does not fit in long", sp);
            const int64_t v = static_cast<int64_t>(~t.int_value + 1);
            return mk::int_lit(v, default_literal_type(v, false), true, sp);
        }
        const bool big = t.int_value > static_cast<uint64_t>(INT64_MAX);
        const int64_t v = static_cast<int64_t>(t.int_value);
        return mk::int_lit(v, default_literal_type(v, big), true, sp);
    }

    ExprPtr unary() {
        const Token& t = peek();
        const Span sp = t.span;
        if (t.kind == Token::Kind::Punct) {
            if (t.lexeme == "-") {
                take();
                if (peek().kind == Token::Kind::Int) {
                    const Token& lit = take();
                    return postfix(literal_from(lit, true, sp));
                }
                return mk::uop(UnOp{UnOpKind::Neg, {}}, unary(), sp);
            }
            if (t.lexeme == "!") {
                take();
                return mk::deref(unary(), sp);
            }
            if (t.lexeme == "~") {
                take();
                return mk::uop(UnOp{UnOpKind::BitNot, {}}, unary(), sp);
            }
            if (t.lexeme == "(" && peek(1).kind == Token::Kind::Keyword && prim_from_name(peek(1).lexeme) &&
                is_punct(")", 2)) {
                take();
                const PrimTy target = *prim_from_name(take().lexeme);
                take();
                return mk::cast(target, unary(), sp);
            }
        }
        if (accept_kw("not")) return mk::uop(UnOp{UnOpKind::LogNot, {}}, unary(), sp);
        return postfix(primary());
    }

    ExprPtr postfix(ExprPtr e) {
        for (;;) {
            if (is_punct("(")) {
                const Span sp = take().span;
                if (e->kind != ExprKind::Var) fail_at("only named functions can be called", sp);
                std::vector<ExprPtr> args;
                const int saved = std::exchange(arm_depth_, 0);
                if (!accept(")")) {
                    for (;;) {
                        args.push_back(expr());
                        if (accept(")")) break;
                        expect(",");
                    }
                }
                arm_depth_ = saved;
                e = mk::app(std::move(e), std::move(args), e->span);
            } else if (is_punct(".")) {
                const Span sp = take().span;
                e = mk::field(std::move(e), expect_ident(), sp);
            } else {
                return e;
            }
        }
    }

    ExprPtr parenthesized() {
        expect("(");
        const int saved = std::exchange(arm_depth_, 0);
        auto e = expr();
        arm_depth_ = saved;
        expect(")");
        return e;
    }

    ExprPtr primary() {
        const Token& t = peek();
        const Span sp = t.span;
        switch (t.kind) {
        case Token::Kind::Int: return literal_from(take(), false, sp);
        case Token::Kind::Ident: {
            std::string x = expect_ident();
            if (x == "_") fail_at("'_' cannot be used as an expression", sp);
            if (is_punct("{")) return struct_init(std::move(x), sp);
            return mk::var(std::move(x), sp);
        }
        case Token::Kind::Punct:
            if (t.lexeme == "(") {
                if (is_punct(")", 1)) {
                    take();
                    take();
                    return mk::unit(sp);
                }
                return parenthesized();
            }
            break;
        case Token::Kind::Keyword:
            if (accept_kw("true")) return mk::bool_lit(true, sp);
            if (accept_kw("false")) return mk::bool_lit(false, sp);
            if (accept_kw("ref")) return mk::ref(parenthesized(), sp);
            if (accept_kw("some")) return mk::some(parenthesized(), sp);
            if (accept_kw("none")) {
                std::optional<Ty> ty;
                if (accept("[")) {
                    ty = type();
                    expect("]");
                }
                return mk::none(std::move(ty), sp);
            }
            if (accept_kw("for")) return for_expr(sp);
            if (is_kw("let") || is_kw("if") || is_kw("match")) return expr();
            break;
        default: break;
        }
        fail("unexpected '" + t.lexeme + "' in expression");
    }

    ExprPtr struct_init(std::string id, Span sp) {
        expect("{");
        const int saved = std::exchange(arm_depth_, 0);
        std::vector<std::string> names;
        std::vector<ExprPtr> vals;
        if (!accept("}")) {
            for (;;) {
                names.push_back(expect_ident());
                expect("=");
                vals.push_back(expr());
                if (accept("}")) break;
                expect(",");
            }
        }
        arm_depth_ = saved;
        return mk::struct_init(std::move(id), std::move(names), std::move(vals), sp);
    }

    ExprPtr for_expr(Span sp) {
        expect("(");
        const int saved = std::exchange(arm_depth_, 0);
        auto lo = expr();
        expect("...");
        auto hi = expr();
        expect(",");
        Dir d;
        if (accept_kw("Up"))
            d = Dir::Up;
        else if (accept_kw("Down"))
            d = Dir::Down;
        else
            fail("expected 'Up' or 'Down'");
        expect(")");
        expect("{");
        auto body = expr();
        accept(";");
        expect("}");
        arm_depth_ = saved;
        return mk::for_(std::move(lo), std::move(hi), d, std::move(body), sp);
    }
};

} // namespace

Program parse_program(std::string_view source) { return Parser(source).program(); }
ExprPtr parse_expr(std::string_view source) { return Parser(source).whole_expr(); }
Ty parse_type(std::string_view source) { return Parser(source).whole_type(); }

} // namespace beepl
