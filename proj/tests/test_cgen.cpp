// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;

namespace {

TypingContext fragment_context() {
    TypingContext ctx = context_from_registry(default_helper_registry());
    ctx.gamma["n"] = Ty::int32();
    ctx.gamma["p"] = Ty::option(Ty::ref(Ty::int64()));
    ctx.gamma["r"] = Ty::ref(Ty::int32());
    ctx.gamma["d"] = Ty::bytes();
    return ctx;
}

std::string lowered(const std::string& src) { return lower_fragment(fragment_context(), parse_expr(src)).text(); }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

CUnit emit_corpus(const std::string& file, CMode mode = CMode::Host) {
    CgenOptions o;
    o.mode = mode;
    return emit_program(check_program(parse_program(read_corpus(file))), o);
}

} // namespace

TEST_CASE("C spelling of types and literals") {
    CHECK(c_type(Ty::option(Ty::ref(Ty::int64()))) == "int64_t *");
    CHECK(c_type(Ty::struct_("ethhdr")) == "struct ethhdr *");
    CHECK(c_type(Ty::boolean()) == "_Bool");
    CHECK(c_type(Ty::bytes()) == "bytes_t");
    CHECK(c_literal(PrimTy::int32(), INT32_MIN) == "(-2147483647 - 1)");
    CHECK(c_literal(PrimTy::long_(), INT64_MIN) == "(-9223372036854775807LL - 1)");
    CHECK(c_literal(PrimTy::long_(Sign::Unsigned), -1) == "18446744073709551615ULL");
    CHECK(c_literal(PrimTy::int_(32, Sign::Unsigned), 5) == "5U");
}

TEST_CASE("ref allocates a local cell") {
    const CFragment f = lower_ref(fragment_context(), parse_expr("ref(2)"));
    CHECK(f.value == "&__bpl_r0");
    CHECK(contains(f.text(), "__bpl_r0 = 2;"));
    CHECK_THROWS(lower_ref(fragment_context(), parse_expr("n + 1")));
}

TEST_CASE("for loops evaluate bounds once and guard the range") {
    const std::string up = lowered("for (1 ... 5, Up) { r := !r + 1 }");
    CHECK(contains(up, "for (__bpl_i0 = 1; __bpl_i0 <= 5; __bpl_i0++)"));
    const std::string down = lowered("for (5L ... 1L, Down) { r := !r + 1 }");
    CHECK(contains(down, "if (5LL >= 1LL)"));
    CHECK(contains(down, "if (__bpl_i0 == 1LL) break;"));
}

TEST_CASE("division and shifts carry their guards") {
    CHECK(contains(lowered("n / n"), "(n == 0 ? 0 : ((n == (-2147483647 - 1) && n == (-1)) ? 0 :"));
    CHECK(contains(lowered("n << n"), "((uint64_t)n >= 32 ? 0 :"));
    const CFragment g = lower_guarded_binop(fragment_context(), parse_expr("n % 3"));
    CHECK(audit_guarded_ops(g.text()).empty());
}

TEST_CASE("option match tests for NULL") {
    const std::string t = lowered("match p with | pnone => 0L | psome q => !q");
    const auto guard = t.find("if (p == NULL)");
    const auto use = t.find("= *q");
    REQUIRE(guard != std::string::npos);
    CHECK(use > guard);
    CHECK(contains(t, "q = p;"));
}

TEST_CASE("bytes match compares against the region end") {
    const CFragment f = lower_match_bytes(
        fragment_context(), parse_expr("match d with | eth, struct ethhdr : (h_proto, uint16) => h_proto | _ => 0u16"));
    const std::string t = f.text();
    CHECK(contains(t, "__bpl_b0.start + sizeof(struct ethhdr) > __bpl_b0.end"));
    CHECK(contains(t, "eth = (struct ethhdr *)__bpl_b0.start;"));
    CHECK(t.find("sizeof(struct ethhdr)") < t.find("eth->h_proto"));
}

TEST_CASE("corpus output passes both audits") {
    for (const char* f : {"bprog1.bpl", "bprog3.bpl", "bprog4.bpl", "loop.bpl", "shift.bpl", "foo_bar.bpl"}) {
        INFO(f);
        for (CMode m : {CMode::Host, CMode::Ebpf}) {
            const CUnit u = emit_corpus(f, m);
            CHECK(audit_dereferences(u).empty());
            CHECK(audit_guarded_ops(u).empty());
        }
    }
}

TEST_CASE("generated programs lower to audited C") {
    for (uint64_t i = 0; i < 300; ++i) {
        const Generated g = generate_program(sub_seed(5, i));
        for (CMode m : {CMode::Host, CMode::Ebpf}) {
            CgenOptions o;
            o.mode = m;
            const CUnit u = emit_program(g.typed, o);
            INFO(g.source);
            CHECK(audit_dereferences(u).empty());
            CHECK(audit_guarded_ops(u).empty());
        }
    }
}

TEST_CASE("audits flag unguarded code") {
    CHECK_FALSE(audit_guarded_ops("int f(int a, int b) { return a / b; }").empty());
    CHECK_FALSE(audit_guarded_ops("int f(int a, int b) { return a << b; }").empty());
    CHECK(audit_guarded_ops("int f(int a) { return a / 4; }").empty());

    CFunction f;
    f.name = f.c_name = "f";
    f.body.kind = CStmt::Kind::Block;
    CStmt use;
    use.text = "return *p;";
    use.derefs = {"p"};
    f.body.body.push_back(use);
    CHECK_FALSE(audit_dereferences(f).empty());

    CStmt guard;
    guard.kind = CStmt::Kind::If;
    guard.text = "p == NULL";
    guard.null_guard = "p";
    CStmt ret;
    ret.text = "return 0;";
    guard.body.push_back(ret);
    guard.orelse.push_back(use);
    f.body.body = {guard};
    CHECK(audit_dereferences(f).empty());
}

TEST_CASE("section attributes only in eBPF mode") {
    const CUnit host = emit_corpus("bprog4.bpl", CMode::Host);
    const CUnit bpf = emit_corpus("bprog4.bpl", CMode::Ebpf);
    CHECK(contains(bpf.text, "SEC(\"xdp\")"));
    CHECK(contains(host.text, "int main(void)"));
    CHECK_FALSE(contains(bpf.text, "int main(void)"));
    CHECK_FALSE(contains(bpf.text, "#include"));
}

TEST_CASE("emitted host C compiles and agrees with the interpreter") {
    const auto cc = find_c_compiler();
    if (!cc) SKIP("no C compiler");
    const std::string dir = (std::filesystem::temp_directory_path() / "beepl-cgen-test").string();
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"fun main() : int { let x : int* = ref(2) in !x }", "2"},
        {"fun main() : int { let z : int = 0 in 7 % z }", "0"},
        {read_corpus("loop.bpl"), "7"},
        {read_corpus("shift.bpl"), "0"},
    };
    for (const auto& [src, want] : cases) {
        const TypedProgram tp = check_program(parse_program(src));
        const DiffCase c = differential_one(tp, *choose_entry(tp, std::nullopt), {}, *cc, dir);
        INFO(src << "\n" << c.detail);
        CHECK(c.agree);
        CHECK(c.native == want);
    }
    std::filesystem::remove_all(dir);
}
