// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <functional>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;

namespace {

TypedProgram check(const std::string& src) { return check_program(parse_program(src)); }

Diagnostic rejection(const std::string& src) {
    try {
        check(src);
    } catch (const CompileError& e) {
        return e.diag;
    }
    FAIL("program was accepted:\n" << src);
    return {};
}

std::pair<Ty, Effect> infer(const std::string& e) {
    return infer_expr(context_from_registry(default_helper_registry()), parse_expr(e));
}

} // namespace

TEST_CASE("annotated effects of the allocation examples") {
    const TypedProgram tp = check(read_corpus("foo_bar.bpl"));
    CHECK(to_string(tp.funs.at("foo").inferred) == "<alloc,read>");
    CHECK(to_string(tp.funs.at("bar").inferred) == "<alloc,read,write,read>");
}

TEST_CASE("declared effect must cover the inferred one") {
    const auto d = rejection("fun f() : int, <read> { let x : int* = ref(2) in !x }");
    CHECK(d.code == "EffectAnnotationTooSmall");
    CHECK_NOTHROW(check("fun f() : int, <alloc,read,write> { let x : int* = ref(2) in !x }"));
}

TEST_CASE("loop program is terminating") {
    const TypedProgram tp = check(read_corpus("loop.bpl"));
    const Effect& e = tp.funs.at("loop").inferred;
    CHECK_FALSE(e.contains(EffectAtom::Divergence));
    CHECK(e.contains(EffectAtom::Write));
}

TEST_CASE("dereferencing an option is rejected") {
    const auto d = rejection(read_corpus("bprog2.bpl"));
    CHECK(d.code == "DerefOfOption");
    CHECK(d.rule == "TDEREF");
    CHECK(rejection("fun f(option(int*) p) : unit { p := 1 }").code == "DerefOfOption");
}

TEST_CASE("matched option is accepted") {
    const TypedProgram tp = check(read_corpus("bprog3.bpl"));
    CHECK(tp.funs.at("bprog3").inferred.contains(EffectAtom::Io));
}

TEST_CASE("loop body may not mention its bounds") {
    const auto d = rejection("fun f(int n) : unit { for (0 ... n, Up) { let y : int = n in () } }");
    CHECK(d.code == "ForBodyCapturesBounds");
    CHECK_NOTHROW(check("fun f(int n) : unit { let m : int* = ref(0) in for (0 ... n, Up) { m := !m + 1 } }"));
}

TEST_CASE("option matches need both arms") {
    CHECK(rejection("fun f(option(int*) p) : int { match p with | pnone => 0 }").code == "NonExhaustiveOptionMatch");
    CHECK_NOTHROW(check("fun f(option(int*) p) : int { match p with | psome q => !q | _ => 0 }"));
    CHECK_NOTHROW(check("fun f(option(int*) p) : int { match p with | psome q => !q | pnone => 0 }"));
}

TEST_CASE("calls must target earlier declarations") {
    const auto d = rejection("fun f() : int { g() }\nfun g() : int { 1 }");
    CHECK(d.code == "ForwardCall");
    CHECK_NOTHROW(check("fun g() : int { 1 }\nfun f() : int { g() }"));
}

TEST_CASE("no arithmetic on pointers") {
    CHECK(rejection("fun f(int* p) : int { -p }").code == "PointerArithmetic");
    CHECK(rejection("fun f(int* p) : int { (int)p }").code == "PointerArithmetic");
}

TEST_CASE("branches must agree") {
    CHECK(rejection("fun f() : int { if true then 1 else false }").code == "BranchTypeMismatch");
}

TEST_CASE("expression typing") {
    CHECK(infer("1 + 2").first == Ty::int32());
    CHECK(infer("1L + 2L").first == Ty::int64());
    CHECK(infer("3u8 < 4u8").first == Ty::boolean());
    auto [t, e] = infer("let x : int* = ref(2) in !x");
    CHECK(t == Ty::int32());
    CHECK(to_string(e) == "<alloc,read>");
    CHECK(infer("none[option(long*)]").first == Ty::option(Ty::ref(Ty::int64())));
}

TEST_CASE("literals take the type of their binding") {
    const TypedProgram tp = check("fun f() : long { let r : long = 808464432 in r >> r }");
    CHECK(tp.funs.at("f").decl.body->kids[0]->kind == ExprKind::ConstLong);
}

TEST_CASE("derivations name the rule at each node") {
    const TypedProgram tp = check_program(parse_program(read_corpus("loop.bpl")), default_helper_registry(), true);
    const auto& d = tp.funs.at("loop").derivation;
    REQUIRE(d);
    CHECK(d->rule == "TFDECL");
    std::vector<std::string> rules;
    std::function<void(const Derivation&)> walk = [&](const Derivation& n) {
        rules.push_back(n.rule);
        for (const auto& p : n.premises) walk(p);
    };
    walk(*d);
    for (const char* r : {"TBIND", "TREF", "TFOR", "TMASSGN", "TDEREF"}) {
        INFO(r);
        CHECK(std::find(rules.begin(), rules.end(), r) != rules.end());
    }
}

TEST_CASE("generated programs are well typed") {
    for (uint64_t seed = 100; seed < 400; ++seed) {
        const Generated g = generate_program(seed);
        INFO(g.source);
        CHECK_NOTHROW(check_program(g.program));
        CHECK_FALSE(g.typed.funs.at("main").inferred.contains(EffectAtom::Divergence));
    }
}
