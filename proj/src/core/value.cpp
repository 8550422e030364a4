// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/core.hpp"

namespace beepl {

int64_t normalize(const PrimTy& p, uint64_t raw) {
    if (p.is_bool()) return raw != 0 ? 1 : 0;
    if (p.bits == 64) return static_cast<int64_t>(raw);
    const uint64_t mask = (uint64_t{1} << p.bits) - 1;
    raw &= mask;
    if (p.is_signed() && (raw >> (p.bits - 1)) != 0) raw |= ~mask;
    return static_cast<int64_t>(raw);
}

Value Value::boolean(bool b) {
    Value v;
    v.kind = Kind::Bool;
    v.prim = PrimTy::boolean();
    v.i = b ? 1 : 0;
    return v;
}

Value Value::integer(PrimTy p, int64_t x) {
    if (p.is_bool()) return boolean(x != 0);
    Value v;
    v.kind = p.kind == PrimTy::Kind::Long ? Kind::Long : Kind::Int;
    v.prim = p;
    v.i = normalize(p, static_cast<uint64_t>(x));
    return v;
}

Value Value::loc(uint64_t b, int64_t o) {
    Value v;
    v.kind = Kind::Loc;
    v.block = b;
    v.offset = o;
    return v;
}

Value Value::opt_none(Ty t) {
    Value v;
    v.kind = Kind::OptNone;
    v.none_ty = std::move(t);
    return v;
}

Value Value::opt_some(uint64_t b, int64_t o) {
    Value v = loc(b, o);
    v.kind = Kind::OptSome;
    return v;
}

Value Value::bytes(uint64_t b, int64_t o, uint64_t len) {
    Value v = loc(b, o);
    v.kind = Kind::Bytes;
    v.len = len;
    return v;
}

Value Value::struct_ref(uint64_t b, int64_t o, std::string id) {
    Value v = loc(b, o);
    v.kind = Kind::StructRef;
    v.id = std::move(id);
    return v;
}

Value Value::undef() {
    Value v;
    v.kind = Kind::Undef;
    return v;
}

bool Value::operator==(const Value& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
    case Kind::Unit:
    case Kind::Undef: return true;
    case Kind::Bool: return i == o.i;
    case Kind::Int:
    case Kind::Long: return prim == o.prim && i == o.i;
    case Kind::Loc:
    case Kind::OptSome: return block == o.block && offset == o.offset;
    case Kind::OptNone: return true;
    case Kind::Bytes: return block == o.block && offset == o.offset && len == o.len;
    case Kind::StructRef: return block == o.block && offset == o.offset && id == o.id;
    }
    return false;
}

std::string to_string(const Value& v) {
    switch (v.kind) {
    case Value::Kind::Unit: return "()";
    case Value::Kind::Bool: return v.i ? "true" : "false";
    case Value::Kind::Int:
    case Value::Kind::Long:
        if (!v.prim.is_signed() && v.prim.bits == 64) return std::to_string(static_cast<uint64_t>(v.i));
        return std::to_string(v.i);
    case Value::Kind::Loc: return "<loc " + std::to_string(v.block) + "," + std::to_string(v.offset) + ">";
    case Value::Kind::OptNone: return "None";
    case Value::Kind::OptSome: return "Some(<loc " + std::to_string(v.block) + "," + std::to_string(v.offset) + ">)";
    case Value::Kind::Bytes:
        return "<bytes " + std::to_string(v.block) + "," + std::to_string(v.offset) + "," + std::to_string(v.len) + ">";
    case Value::Kind::StructRef: return "<struct " + v.id + " " + std::to_string(v.block) + ">";
    case Value::Kind::Undef: return "undef";
    }
    return "?";
}

ExprPtr value_to_expr(const Value& v) {
    switch (v.kind) {
    case Value::Kind::Unit: return mk::unit();
    case Value::Kind::Bool: return mk::bool_lit(v.i != 0);
    case Value::Kind::Int:
    case Value::Kind::Long: return mk::int_lit(v.i, v.prim);
    case Value::Kind::Loc: return mk::loc(v.block, v.offset);
    case Value::Kind::OptNone: return mk::none(v.none_ty);
    case Value::Kind::OptSome: return mk::some(mk::loc(v.block, v.offset));
    case Value::Kind::Bytes: return mk::bytes_val(v.block, v.offset, v.len);
    case Value::Kind::StructRef: return mk::struct_val(v.block, v.offset, v.id);
    case Value::Kind::Undef: return mk::undef();
    }
    return mk::undef();
}

std::optional<Value> expr_to_value(const Expr& e) {
    switch (e.kind) {
    case ExprKind::UnitLit: return Value::unit();
    case ExprKind::ConstBool: return Value::boolean(e.bval);
    case ExprKind::ConstInt:
    case ExprKind::ConstLong: return Value::integer(e.lit_ty, e.ival);
    case ExprKind::Loc: return Value::loc(e.block, e.ival);
    case ExprKind::NoneLit: return e.ty ? Value::opt_none(*e.ty) : Value::opt_none(Ty::unit());
    case ExprKind::SomeLit:
        if (e.kids[0]->kind == ExprKind::Loc) return Value::opt_some(e.kids[0]->block, e.kids[0]->ival);
        return std::nullopt;
    case ExprKind::BytesVal: return Value::bytes(e.block, e.ival, e.len);
    case ExprKind::StructVal: return Value::struct_ref(e.block, e.ival, e.name);
    case ExprKind::Undef: return Value::undef();
    default: return std::nullopt;
    }
}

} // namespace beepl
