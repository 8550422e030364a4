// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;

namespace {

RunResult run_src(const std::string& src, const std::string& entry, ExternalWorld w = {}) {
    static std::vector<TypedProgram> keep;
    keep.push_back(check_program(parse_program(src)));
    return run_program(keep.back(), entry, w);
}

Value eval_src(const std::string& src, const std::string& entry, ExternalWorld w = {}) {
    RunResult r = run_src(src, entry, std::move(w));
    REQUIRE(r.eval.ok());
    CHECK(r.state.monitor.clean());
    return r.eval.value;
}

Value iv(int64_t v, PrimTy p = PrimTy::int32()) { return Value::integer(p, v); }

} // namespace

TEST_CASE("loop example increments five times") {
    CHECK(eval_src(read_corpus("loop.bpl"), "loop").i == 7);
}

TEST_CASE("allocation examples") {
    const std::string src = read_corpus("foo_bar.bpl");
    CHECK(eval_src(src, "foo").i == 3);
    CHECK(eval_src(src, "bar").i == 3);
}

TEST_CASE("unsafe operators step to zero") {
    CHECK(eval_src("fun f() : int { let z : int = 0 in 7 % z }", "f").i == 0);
    CHECK(eval_src("fun f() : int { let z : int = 0 in 7 / z }", "f").i == 0);
    CHECK(eval_src("fun f() : int { let m : int = -2147483647 - 1 in m / (-1) }", "f").i == 0);
    CHECK(eval_src("fun f() : long { let r : long = 808464432 in r >> r }", "f").i == 0);
    CHECK(eval_src("fun f() : int { 1 << (-1) }", "f").i == 0);
}

TEST_CASE("bop_sem wraps at operand width") {
    CHECK(bop_sem(BinOp::Add, iv(INT32_MAX), iv(1)).i == INT32_MIN);
    CHECK(bop_sem(BinOp::Sub, iv(0, PrimTy::int_(8, Sign::Unsigned)), iv(1, PrimTy::int_(8, Sign::Unsigned))).i ==
          255);
    CHECK(bop_sem(BinOp::Mul, iv(-128, PrimTy::int_(8)), iv(-1, PrimTy::int_(8))).i == -128);
    CHECK(bop_sem(BinOp::Mod, iv(-7), iv(2)).i == -1);
    CHECK(bop_sem(BinOp::Shr, iv(-8), iv(1)).i == -4);
    CHECK(bop_sem(BinOp::Lt, iv(-1, PrimTy::int_(32, Sign::Unsigned)), iv(1, PrimTy::int_(32, Sign::Unsigned))).i ==
          0);
    CHECK(bop_sem(BinOp::Div, iv(1), iv(0)).is_undef());
}

TEST_CASE("unsafe predicate classes") {
    CHECK(unsafe(BinOp::Div, iv(1), iv(0)));
    CHECK(unsafe(BinOp::Mod, iv(INT32_MIN), iv(-1)));
    CHECK(unsafe(BinOp::Shl, iv(1), iv(32)));
    CHECK(unsafe(BinOp::Shr, iv(1), iv(-1)));
    CHECK_FALSE(unsafe(BinOp::Div, iv(INT32_MIN), iv(1)));
    CHECK_FALSE(unsafe(BinOp::Shl, iv(1), iv(31)));
    CHECK_FALSE(unsafe(BinOp::Add, iv(INT32_MAX), iv(1)));
}

TEST_CASE("range counts inclusive iterations") {
    CHECK(range(iv(1), iv(5), Dir::Up) == 5);
    CHECK(range(iv(5), iv(1), Dir::Up) == 0);
    CHECK(range(iv(5), iv(1), Dir::Down) == 5);
    CHECK(range(iv(3), iv(3), Dir::Down) == 1);
    const PrimTy u64 = PrimTy::long_(Sign::Unsigned);
    CHECK(range(iv(0, u64), iv(-1, u64), Dir::Up) == UINT64_MAX);
}

TEST_CASE("reduction rules fire in order") {
    const TypedProgram tp = check_program(parse_program(read_corpus("loop.bpl")));
    ExternalWorld w;
    std::vector<std::string> rules;
    run_program(tp, "loop", w, kDefaultFuel, [&](const StepOutcome& o, const State&) { rules.push_back(o.rule); });
    REQUIRE_FALSE(rules.empty());
    CHECK(std::count(rules.begin(), rules.end(), "REFV") >= 1);
    CHECK(std::count(rules.begin(), rules.end(), "FORV") >= 1);
    CHECK(std::count(rules.begin(), rules.end(), "APP3") == 1);
}

TEST_CASE("fuel bounds evaluation") {
    const TypedProgram tp = check_program(parse_program(read_corpus("loop.bpl")));
    ExternalWorld w;
    const RunResult r = run_program(tp, "loop", w, 3);
    CHECK(r.eval.status == EvalResult::Status::FuelExhausted);
}

TEST_CASE("map lookups share the entry") {
    const std::string src = R"(struct { ... } m #section ".maps";
fun f() : long {
    let k : long* = ref(1L) in
    let _ = match bpf_map_lookup_elem(m, k) with | psome p => p := !p + 5L | pnone => () in
    match bpf_map_lookup_elem(m, k) with | psome q => !q | pnone => -1L
})";
    ExternalWorld w;
    w.maps["m"][1] = 10;
    CHECK(eval_src(src, "f", w).i == 15);
    CHECK(eval_src(src, "f").i == -1);
}

TEST_CASE("helper results come from the external world") {
    ExternalWorld w;
    w.uid_gid = 0x0000002a00000007ULL;
    const TypedProgram tp =
        check_program(parse_program("fun f() : long { bpf_get_current_uid_gid() & 0xFFFFFFFF }"));
    const RunResult r = run_program(tp, "f", w);
    REQUIRE(r.eval.ok());
    CHECK(r.eval.value.i == 7);
    CHECK(w.io_log == std::vector<std::string>{"bpf_get_current_uid_gid"});
}

TEST_CASE("packet parse follows the region length") {
    const std::string src = read_corpus("bprog4.bpl");
    auto run_with = [&](const std::string& hex) {
        ExternalWorld w;
        w.packet = parse_hex_bytes(hex);
        return eval_src(src, "bprog4", w).i;
    };
    CHECK(run_with("ff ff ff ff ff ff 00 11 22 33 44 55 86 dd") == 1);
    CHECK(run_with("ff ff ff ff ff ff 00 11 22 33 44 55 08 00") == 2);
    CHECK(run_with("ff ff ff ff ff ff 00 11 22 33 44 55 08") == 1);
    CHECK(run_with("") == 1);
}

TEST_CASE("extract reads little endian fields") {
    const TypedProgram tp = check_program(parse_program("struct two { uint8 a; uint16 b; };\nfun f() : int { 0 }"));
    State s = empty_state(tp.ctx);
    const uint64_t b = s.theta.alloc_raw({0x11, 0x00, 0x34, 0x12, 0x99});
    const auto ex = extract(s, Value::bytes(b, 0, 5), Ty::struct_("two"));
    REQUIRE(ex);
    CHECK(ex->fields.at("a")->ival == 0x11);
    CHECK(ex->fields.at("b")->ival == 0x1234);
    CHECK_FALSE(extract(s, Value::bytes(b, 0, 3), Ty::struct_("two")));
    CHECK(s.monitor.clean());
}

TEST_CASE("final states are well formed") {
    for (const char* f : {"loop.bpl", "foo_bar.bpl"}) {
        const TypedProgram tp = check_program(parse_program(read_corpus(f)));
        ExternalWorld w;
        const RunResult r = run_program(tp, tp.fun_order.front(), w);
        CHECK(well_formed(r.state));
    }
}

TEST_CASE("removing the operator guard exposes undefined values") {
    // Mutation check: the property harness must notice when BOPV stops guarding.
    const TypedProgram tp = check_program(parse_program("fun main() : int { let z : int = 0 in 7 % z }"));
    PropertyConfig broken;
    broken.guard_unsafe = false;
    const PropertyReport bad = audit_program(tp, "main", {}, broken);
    CHECK_FALSE(bad.ok);
    CHECK(bad.property == "NoUndef");
    CHECK(audit_program(tp, "main", {}).ok);
}
