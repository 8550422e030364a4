// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;

namespace {

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const CompileError& e) {
        return e.diag.code;
    }
    return "";
}

} // namespace

TEST_CASE("lexer keeps literal suffixes") {
    const auto toks = tokenize("7u8 0x10L 3UL p'");
    REQUIRE(toks.size() >= 4);
    CHECK(toks[0].kind == Token::Kind::Int);
    CHECK(toks[0].int_value == 7);
    CHECK(toks[0].suffix == "u8");
    CHECK(toks[1].int_value == 16);
    CHECK(toks[1].is_long);
    CHECK(toks[2].suffix == "UL");
    CHECK(toks[3].kind == Token::Kind::Ident);
    CHECK(toks[3].lexeme == "p'");
}

TEST_CASE("spans record line and column") {
    const auto toks = tokenize("fun\n  main");
    CHECK(toks[1].span.line == 2);
    CHECK(toks[1].span.col == 3);
}

TEST_CASE("binary operator precedence") {
    auto e = parse_expr("1 + 2 * 3");
    REQUIRE(e->kind == ExprKind::Prim);
    CHECK(e->bop == BinOp::Add);
    CHECK(e->kids[1]->bop == BinOp::Mul);
    auto s = parse_expr("a << 1 < b");
    CHECK(s->bop == BinOp::Lt);
    auto l = parse_expr("a && b || c");
    CHECK(l->bop == BinOp::LOr);
}

TEST_CASE("corpus programs parse and print back to themselves") {
    for (const char* f : {"bprog1.bpl", "bprog2.bpl", "bprog3.bpl", "bprog4.bpl", "loop.bpl", "shift.bpl",
                          "foo_bar.bpl"}) {
        INFO(f);
        const Program p = parse_program(read_corpus(f));
        const std::string once = print_program(p);
        const std::string twice = print_program(parse_program(once));
        CHECK(once == twice);
    }
}

TEST_CASE("generated programs survive a print and reparse") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        const Generated g = generate_program(seed);
        const Program back = parse_program(g.source);
        CHECK(print_program(back) == g.source);
    }
}

TEST_CASE("section attribute before the function header is rejected") {
    CHECK(code_of([] { parse_program(read_corpus("bprog4_verbatim.bpl")); }) == "ParseError");
}

TEST_CASE("reserved and malformed input") {
    CHECK(code_of([] { parse_expr("__bpl_t0 + 1"); }) == "ReservedIdentifier");
    CHECK(code_of([] { parse_expr("300u8"); }) == "LiteralOutOfRange");
    CHECK(code_of([] { parse_program("fun f() : int { 1 "); }) == "ParseError");
    CHECK(code_of([] { parse_expr("1 $ 2"); }) == "LexError");
}

TEST_CASE("types parse to their structural form") {
    CHECK(parse_type("option(long*)") == Ty::option(Ty::ref(Ty::int64())));
    CHECK(parse_type("struct ethhdr*") == Ty::ref(Ty::struct_("ethhdr")));
    CHECK(parse_type("uint16") == Ty::prim(PrimTy::int_(16, Sign::Unsigned)));
    CHECK(print_type(parse_type("int8*")) == "int8*");
}

TEST_CASE("diagnostics render with location and json") {
    try {
        parse_program("fun f() : int {\n  let x = in 1\n}");
        FAIL("expected a parse error");
    } catch (const CompileError& e) {
        const std::string text = render_diagnostic(e.diag, "f.bpl");
        CHECK(text.find("f.bpl:2:") != std::string::npos);
        const std::string json = diagnostics_to_json({e.diag});
        CHECK(json.find("\"ParseError\"") != std::string::npos);
    }
}
