// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/interp.hpp"

namespace beepl {

namespace {

__extension__ typedef __int128 i128;

uint64_t bits_of(const Value& v) { return static_cast<uint64_t>(v.i); }

bool is_int(const Value& v) { return v.kind == Value::Kind::Int || v.kind == Value::Kind::Long; }

} // namespace

bool unsafe(BinOp op, const Value& a, const Value& b) {
    if (!is_int(a) || !is_int(b)) return false;
    const PrimTy& t = a.prim;
    switch (op) {
    case BinOp::Div:
    case BinOp::Mod:
        if (b.i == 0) return true;
        return t.is_signed() && a.i == t.min_value() && b.i == -1;
    case BinOp::Shl:
    case BinOp::Shr:
        if (b.prim.is_signed() && b.i < 0) return true;
        return bits_of(b) >= static_cast<uint64_t>(t.bits);
    default: return false;
    }
}

Value bop_sem(BinOp op, const Value& a, const Value& b) {
    if (op == BinOp::LAnd) return Value::boolean(a.i != 0 && b.i != 0);
    if (op == BinOp::LOr) return Value::boolean(a.i != 0 || b.i != 0);
    if (a.kind == Value::Kind::Bool) {
        if (op == BinOp::Eq) return Value::boolean(a.i == b.i);
        if (op == BinOp::Ne) return Value::boolean(a.i != b.i);
        return Value::undef();
    }
    if (!is_int(a) || !is_int(b)) return Value::undef();
    const PrimTy t = a.prim;
    const bool sgn = t.is_signed();
    const uint64_t ua = bits_of(a);
    const uint64_t ub = bits_of(b);
    auto wrap = [&](uint64_t raw) { return Value::integer(t, normalize(t, raw)); };
    switch (op) {
    case BinOp::Add: return wrap(ua + ub);
    case BinOp::Sub: return wrap(ua - ub);
    case BinOp::Mul: return wrap(ua * ub);
    case BinOp::Div:
    case BinOp::Mod:
        if (unsafe(op, a, b)) return Value::undef();
        if (sgn) return wrap(static_cast<uint64_t>(op == BinOp::Div ? a.i / b.i : a.i % b.i));
        return wrap(op == BinOp::Div ? ua / ub : ua % ub);
    case BinOp::And: return wrap(ua & ub);
    case BinOp::Or: return wrap(ua | ub);
    case BinOp::Xor: return wrap(ua ^ ub);
    case BinOp::Shl:
        if (unsafe(op, a, b)) return Value::undef();
        return wrap(ua << ub);
    case BinOp::Shr:
        if (unsafe(op, a, b)) return Value::undef();
        return sgn ? wrap(static_cast<uint64_t>(a.i >> ub)) : wrap(ua >> ub);
    case BinOp::Eq: return Value::boolean(a.i == b.i);
    case BinOp::Ne: return Value::boolean(a.i != b.i);
    case BinOp::Lt: return Value::boolean(sgn ? a.i < b.i : ua < ub);
    case BinOp::Le: return Value::boolean(sgn ? a.i <= b.i : ua <= ub);
    case BinOp::Gt: return Value::boolean(sgn ? a.i > b.i : ua > ub);
    case BinOp::Ge: return Value::boolean(sgn ? a.i >= b.i : ua >= ub);
    default: return Value::undef();
    }
}

Value uop_sem(const UnOp& op, const Value& v) {
    switch (op.kind) {
    case UnOpKind::LogNot:
        if (v.kind != Value::Kind::Bool) return Value::undef();
        return Value::boolean(v.i == 0);
    case UnOpKind::Neg:
        if (!is_int(v)) return Value::undef();
        return Value::integer(v.prim, normalize(v.prim, uint64_t{0} - bits_of(v)));
    case UnOpKind::BitNot:
        if (!is_int(v)) return Value::undef();
        return Value::integer(v.prim, normalize(v.prim, ~bits_of(v)));
    case UnOpKind::Cast:
        if (!is_int(v) || !op.target.is_integer()) return Value::undef();
        return Value::integer(op.target, normalize(op.target, bits_of(v)));
    }
    return Value::undef();
}

uint64_t range(const Value& lo, const Value& hi, Dir d) {
    // Normalised values are exact: unsigned 64-bit bounds are compared through their unsigned image.
    const bool u64 = !lo.prim.is_signed() && lo.prim.bits == 64;
    auto as_wide = [&](const Value& v) -> i128 {
        return u64 ? static_cast<i128>(static_cast<uint64_t>(v.i)) : static_cast<i128>(v.i);
    };
    const i128 a = as_wide(lo);
    const i128 b = as_wide(hi);
    const i128 n = d == Dir::Up ? b - a + 1 : a - b + 1;
    if (n <= 0) return 0;
    if (n > static_cast<i128>(UINT64_MAX)) return UINT64_MAX;
    return static_cast<uint64_t>(n);
}

} // namespace beepl
