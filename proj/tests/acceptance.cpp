// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;
using boost::multiprecision::cpp_int;

namespace {

struct Outcome {
    enum class Status { Pass, Fail, Skip } status = Status::Pass;
    std::string detail;
};

Outcome fail(std::string why) { return {Outcome::Status::Fail, std::move(why)}; }

// ---------------------------------------------------------------- 1

Outcome cve_corpus() {
    std::ostringstream bad;
    std::size_t n = 0;
    for (const auto& c : run_cve_corpus()) {
        ++n;
        if (!c.ok) bad << c.name << ": " << c.detail << "; ";
    }
    if (!bad.str().empty()) return fail(bad.str());
    return {Outcome::Status::Pass, std::to_string(n) + " corpus checks"};
}

// ---------------------------------------------------------------- 2

Outcome metatheory() {
    GenConfig g;
    g.max_depth = 8;
    PropertyConfig p;
    p.fuel = 1'000'000;
    const SuiteResult r = run_property_suite(1000, 20240601, g, p);
    if (!r.failures.empty() || r.passed != 1000) return fail(suite_summary(r));
    if (r.max_depth_seen > 8) return fail("depth " + std::to_string(r.max_depth_seen) + " exceeds 8");
    return {Outcome::Status::Pass, suite_summary(r)};
}

// ---------------------------------------------------------------- 3

const char* kBoundsProgram = R"(struct s1 { uint8 a; };
struct s2 { uint16 a; };
struct s4 { int a; };
struct s8 { long a; };
#section "xdp"
fun p1(option(struct xdp_md*) ctx) : int {
    match ctx with | pnone => 2 | psome c => match c.data with | x, struct s1 : (a, uint8) => 1 | _ => 0
}
#section "xdp"
fun p2(option(struct xdp_md*) ctx) : int {
    match ctx with | pnone => 2 | psome c => match c.data with | x, struct s2 : (a, uint16) => 1 | _ => 0
}
#section "xdp"
fun p4(option(struct xdp_md*) ctx) : int {
    match ctx with | pnone => 2 | psome c => match c.data with | x, struct s4 : (a, int) => 1 | _ => 0
}
#section "xdp"
fun p8(option(struct xdp_md*) ctx) : int {
    match ctx with | pnone => 2 | psome c => match c.data with | x, struct s8 : (a, long) => 1 | _ => 0
}
#section "xdp"
fun p14(option(struct xdp_md*) ctx) : int {
    match ctx with | pnone => 2 | psome c => match c.data with | x, struct ethhdr : (h_proto, uint16) => 1 | _ => 0
}
)";

Outcome bounds_exhaustion() {
    const TypedProgram tp = check_program(parse_program(kBoundsProgram));
    const std::vector<std::pair<uint64_t, std::string>> targets = {
        {1, "s1"}, {2, "s2"}, {4, "s4"}, {8, "s8"}, {14, "ethhdr"}};
    std::size_t cases = 0;
    for (const auto& [size, id] : targets) {
        const Ty target = Ty::struct_(id);
        if (size_of(target, tp.ctx.pi) != size) return fail(id + " has size " + std::to_string(size_of(target, tp.ctx.pi)));
        const std::string entry = "p" + std::to_string(size);
        for (uint64_t len = 0; len <= 2 * size; ++len) {
            ++cases;
            std::vector<uint8_t> packet(len);
            for (uint64_t i = 0; i < len; ++i) packet[i] = static_cast<uint8_t>(0xa0 + i);
            const bool fits = len >= size;

            State s = empty_state(tp.ctx);
            const uint64_t b = s.theta.alloc_raw(packet);
            const bool extracted = extract(s, Value::bytes(b, 0, len), target).has_value();
            if (extracted != fits)
                return fail("extract " + id + " from " + std::to_string(len) + " bytes: " +
                            (extracted ? "succeeded" : "failed"));

            ExternalWorld w;
            w.packet = packet;
            bool fallback = false;
            bool matched = false;
            RunResult r = run_program(tp, entry, w, kDefaultFuel, [&](const StepOutcome& o, const State&) {
                fallback = fallback || o.rule == "MBYTESF";
                matched = matched || o.rule == "MBYTES";
            });
            if (!r.eval.ok() || !r.state.monitor.clean())
                return fail(entry + " on " + std::to_string(len) + " bytes did not run cleanly");
            const int64_t want = fits ? 1 : 0;
            if (r.eval.value.i != want || fallback == fits || matched != fits)
                return fail(entry + " on " + std::to_string(len) + " bytes returned " + to_string(r.eval.value) +
                            (fallback ? " via the fallback arm" : " via the extraction arm"));
        }
    }
    return {Outcome::Status::Pass, std::to_string(cases) + " region lengths"};
}

// ---------------------------------------------------------------- 4

cpp_int pow2(unsigned n) { return cpp_int(1) << n; }

cpp_int math_value(const Value& v) {
    if (!v.prim.is_signed() && v.prim.bits == 64) return cpp_int(static_cast<uint64_t>(v.i));
    return cpp_int(v.i);
}

cpp_int residue(const cpp_int& x, unsigned bits) {
    cpp_int m = x % pow2(bits);
    if (m < 0) m += pow2(bits);
    return m;
}

// Stored form of the wrapped result: the bit pattern as int64 for 64-bit types, the value otherwise.
int64_t wrap(const cpp_int& x, const PrimTy& p) {
    const unsigned bits = static_cast<unsigned>(p.bits);
    cpp_int m = residue(x, bits);
    if ((p.is_signed() && m >= pow2(bits - 1)) || (bits == 64 && m >= pow2(63))) m -= pow2(bits);
    return static_cast<int64_t>(m);
}

bool oracle_unsafe(BinOp op, const PrimTy& p, const cpp_int& a, const cpp_int& b) {
    switch (op) {
    case BinOp::Div:
    case BinOp::Mod: return b == 0 || (p.is_signed() && a == cpp_int(p.min_value()) && b == -1);
    case BinOp::Shl:
    case BinOp::Shr: return b < 0 || b >= p.bits;
    default: return false;
    }
}

int64_t oracle_bop(BinOp op, const PrimTy& p, const cpp_int& a, const cpp_int& b) {
    const unsigned bits = static_cast<unsigned>(p.bits);
    switch (op) {
    case BinOp::Add: return wrap(a + b, p);
    case BinOp::Sub: return wrap(a - b, p);
    case BinOp::Mul: return wrap(a * b, p);
    case BinOp::Div: return wrap(a / b, p);
    case BinOp::Mod: return wrap(a % b, p);
    case BinOp::And: return wrap(residue(a, bits) & residue(b, bits), p);
    case BinOp::Or: return wrap(residue(a, bits) | residue(b, bits), p);
    case BinOp::Xor: return wrap(residue(a, bits) ^ residue(b, bits), p);
    case BinOp::Shl: return wrap(a * pow2(static_cast<unsigned>(b)), p);
    case BinOp::Shr: {
        const cpp_int d = pow2(static_cast<unsigned>(b));
        cpp_int q = a / d;
        if (a < 0 && q * d != a) q -= 1;
        return wrap(q, p);
    }
    default: break;
    }
    throw std::logic_error("operator outside the oracle");
}

std::vector<PrimTy> integer_types() {
    return {PrimTy::int_(8),  PrimTy::int_(8, Sign::Unsigned),  PrimTy::int_(16), PrimTy::int_(16, Sign::Unsigned),
            PrimTy::int_(32), PrimTy::int_(32, Sign::Unsigned), PrimTy::long_(),  PrimTy::long_(Sign::Unsigned)};
}

Outcome unsafe_table() {
    std::size_t unsafe_rows = 0;
    for (const PrimTy& p : integer_types()) {
        const auto v = [&](int64_t x) { return Value::integer(p, x); };
        std::vector<std::tuple<BinOp, Value, Value, const char*>> rows = {
            {BinOp::Div, v(7), v(0), "zero divisor"},
            {BinOp::Mod, v(7), v(0), "zero divisor"},
            {BinOp::Div, v(0), v(0), "zero divisor"},
            {BinOp::Shl, v(1), v(p.bits), "shift by width"},
            {BinOp::Shr, v(1), v(p.bits), "shift by width"},
            {BinOp::Shl, v(1), v(p.bits + 1), "shift past width"},
        };
        if (p.is_signed()) {
            rows.push_back({BinOp::Div, v(p.min_value()), v(-1), "signed minimum by -1"});
            rows.push_back({BinOp::Mod, v(p.min_value()), v(-1), "signed minimum by -1"});
            rows.push_back({BinOp::Shl, v(1), v(-1), "negative shift"});
            rows.push_back({BinOp::Shr, v(8), v(p.min_value()), "negative shift"});
        }
        for (const auto& [op, a, b, what] : rows) {
            ++unsafe_rows;
            if (!unsafe(op, a, b))
                return fail(std::string(what) + " not flagged for " + to_string(p) + " " + to_string(op));
            if (!bop_sem(op, a, b).is_undef())
                return fail(std::string(what) + " produced a value for " + to_string(p) + " " + to_string(op));
        }
    }

    static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod,
                                BinOp::And, BinOp::Or,  BinOp::Xor, BinOp::Shl, BinOp::Shr};
    const auto types = integer_types();
    std::mt19937_64 rng(0x5eed);
    auto operand = [&](const PrimTy& p) -> int64_t {
        switch (rng() % 6) {
        case 0: return p.min_value();
        case 1: return static_cast<int64_t>(p.max_value());
        case 2: return p.is_signed() ? -1 : 1;
        case 3: return static_cast<int64_t>(rng() % 9);
        default: return normalize(p, rng());
        }
    };
    std::size_t grid = 0;
    while (grid < 64) {
        const BinOp op = ops[rng() % std::size(ops)];
        const PrimTy p = types[rng() % types.size()];
        const Value a = Value::integer(p, operand(p));
        const Value b = is_shift(op) ? Value::integer(p, static_cast<int64_t>(rng() % static_cast<uint64_t>(p.bits)))
                                     : Value::integer(p, operand(p));
        const cpp_int ma = math_value(a);
        const cpp_int mb = math_value(b);
        if (oracle_unsafe(op, p, ma, mb)) continue;
        ++grid;
        if (unsafe(op, a, b))
            return fail("safe pair flagged: " + to_string(a) + " " + to_string(op) + " " + to_string(b));
        const Value got = bop_sem(op, a, b);
        const int64_t want = oracle_bop(op, p, ma, mb);
        if (got.is_undef() || got.i != want)
            return fail(to_string(p) + " " + to_string(a) + " " + to_string(op) + " " + to_string(b) + " = " +
                        to_string(got) + ", oracle " + std::to_string(want));
    }
    return {Outcome::Status::Pass,
            std::to_string(unsafe_rows) + " unsafe rows, " + std::to_string(grid) + " safe pairs match the oracle"};
}

// ---------------------------------------------------------------- 5

Outcome differential() {
    const DiffResult r = run_differential(100, 20240601, std::nullopt);
    if (r.skipped) return {Outcome::Status::Skip, r.skip_reason};
    if (r.agreed != r.programs || r.programs < 100) return fail(diff_summary(r));
    return {Outcome::Status::Pass, diff_summary(r)};
}

// ---------------------------------------------------------------- 6

uint64_t counted_iterations(int64_t l, int64_t h, Dir d) {
    uint64_t n = 0;
    if (d == Dir::Up) {
        if (l <= h)
            for (int64_t i = l; i <= h; ++i) ++n;
    } else {
        if (l >= h)
            for (int64_t i = l; i >= h; --i) ++n;
    }
    return n;
}

Outcome loops() {
    const TypedProgram tp = check_program(parse_program(read_corpus("loop.bpl")));
    ExternalWorld w;
    const RunResult r = run_program(tp, "loop", w);
    if (!r.eval.ok() || r.eval.value.i != 7) return fail("loop program gave " + to_string(r.eval.value));

    std::size_t points = 0;
    for (int64_t lo = -3; lo <= 3; ++lo)
        for (int64_t hi = -3; hi <= 3; ++hi)
            for (Dir d : {Dir::Up, Dir::Down}) {
                ++points;
                const uint64_t want = counted_iterations(lo, hi, d);
                for (const PrimTy& p : {PrimTy::int32(), PrimTy::long_()}) {
                    const uint64_t got = range(Value::integer(p, lo), Value::integer(p, hi), d);
                    if (got != want)
                        return fail("range(" + std::to_string(lo) + ", " + std::to_string(hi) + ") = " +
                                    std::to_string(got) + ", expected " + std::to_string(want));
                }
                std::ostringstream src;
                src << "fun f() : int { let c : int* = ref(0) in let _ = for (" << lo << " ... " << hi << ", "
                    << (d == Dir::Up ? "Up" : "Down") << ") { c := !c + 1 } in !c }";
                const TypedProgram lp = check_program(parse_program(src.str()));
                ExternalWorld lw;
                const RunResult lr = run_program(lp, "f", lw);
                if (!lr.eval.ok() || static_cast<uint64_t>(lr.eval.value.i) != want)
                    return fail(src.str() + " gave " + to_string(lr.eval.value));
            }
    return {Outcome::Status::Pass, "loop gives 7, " + std::to_string(points) + " range points agree"};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "cve-corpus", 5, cve_corpus},
        {2, "metatheory-suite", 120, metatheory},
        {3, "bounds-exhaustion", 1, bounds_exhaustion},
        {4, "unsafe-table", 1, unsafe_table},
        {5, "differential", 180, differential},
        {6, "loop-semantics", 1, loops},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.status != Outcome::Status::Fail && secs > c.budget_seconds) {
            o.status = Outcome::Status::Fail;
            o.detail += "; over the time budget";
        }
        const char* tag = o.status == Outcome::Status::Pass ? "PASS" : o.status == Outcome::Status::Skip ? "SKIP" : "FAIL";
        all = all && o.status != Outcome::Status::Fail;
        std::printf("%s criterion %d %s (%.2fs, budget %.0fs): %s\n", tag, c.id, c.name, secs, c.budget_seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
