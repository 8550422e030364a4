// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/core.hpp"

namespace beepl {

bool Pattern::operator==(const Pattern& o) const {
    if (kind != o.kind || binder != o.binder) return false;
    if (kind != Kind::Bytes) return true;
    if (!(target == o.target) || fields.size() != o.fields.size()) return false;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].name != o.fields[i].name || fields[i].ty != o.fields[i].ty) return false;
    return true;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case ExprKind::Var:
        if (a.name != b.name) return false;
        break;
    case ExprKind::ConstInt:
    case ExprKind::ConstLong:
        if (a.ival != b.ival || !(a.lit_ty == b.lit_ty)) return false;
        break;
    case ExprKind::ConstBool:
        if (a.bval != b.bval) return false;
        break;
    case ExprKind::Prim:
        if (a.op != b.op) return false;
        if (a.op == PrimOpKind::Bop && a.bop != b.bop) return false;
        if (a.op == PrimOpKind::Uop && !(a.uop == b.uop)) return false;
        break;
    case ExprKind::Let:
        if (a.name != b.name || a.ty != b.ty) return false;
        break;
    case ExprKind::StructInit:
        if (a.name != b.name || a.field_names != b.field_names) return false;
        break;
    case ExprKind::Field:
        if (a.name != b.name) return false;
        break;
    case ExprKind::NoneLit:
        if (a.ty != b.ty) return false;
        break;
    case ExprKind::For:
        if (a.dir != b.dir) return false;
        break;
    case ExprKind::Loc:
        if (a.block != b.block || a.ival != b.ival) return false;
        break;
    case ExprKind::BytesVal:
        if (a.block != b.block || a.ival != b.ival || a.len != b.len) return false;
        break;
    case ExprKind::StructVal:
        if (a.block != b.block || a.ival != b.ival || a.name != b.name) return false;
        break;
    case ExprKind::Repeat:
        if (a.ival != b.ival) return false;
        break;
    default: break;
    }
    if (a.kids.size() != b.kids.size() || a.arms.size() != b.arms.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!expr_equal(a.kids[i], b.kids[i])) return false;
    for (std::size_t i = 0; i < a.arms.size(); ++i)
        if (!(a.arms[i].pat == b.arms[i].pat) || !expr_equal(a.arms[i].body, b.arms[i].body)) return false;
    return true;
}

namespace mk {

namespace {
std::shared_ptr<Expr> node(ExprKind k, Span sp) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->span = sp;
    return e;
}
} // namespace

ExprPtr var(std::string x, Span sp) {
    auto e = node(ExprKind::Var, sp);
    e->name = std::move(x);
    return e;
}

ExprPtr int_lit(int64_t v, PrimTy t, bool polymorphic, Span sp) {
    auto e = node(t.kind == PrimTy::Kind::Long ? ExprKind::ConstLong : ExprKind::ConstInt, sp);
    e->lit_ty = t;
    e->ival = normalize(t, static_cast<uint64_t>(v));
    e->polymorphic = polymorphic;
    return e;
}

ExprPtr poly_lit(int64_t v, Span sp) {
    const bool fits32 = v >= INT32_MIN && v <= INT32_MAX;
    return int_lit(v, fits32 ? PrimTy::int32() : PrimTy::int64(), true, sp);
}

ExprPtr long_lit(int64_t v, Sign s, bool polymorphic, Span sp) { return int_lit(v, PrimTy::long_(s), polymorphic, sp); }

ExprPtr bool_lit(bool b, Span sp) {
    auto e = node(ExprKind::ConstBool, sp);
    e->bval = b;
    e->lit_ty = PrimTy::boolean();
    return e;
}

ExprPtr unit(Span sp) { return node(ExprKind::UnitLit, sp); }

ExprPtr app(ExprPtr callee, std::vector<ExprPtr> args, Span sp) {
    auto e = node(ExprKind::App, sp);
    e->kids.push_back(std::move(callee));
    for (auto& a : args) e->kids.push_back(std::move(a));
    return e;
}

ExprPtr call(const std::string& f, std::vector<ExprPtr> args, Span sp) { return app(var(f, sp), std::move(args), sp); }

namespace {
std::shared_ptr<Expr> prim_node(PrimOpKind op, std::vector<ExprPtr> kids, Span sp) {
    auto e = node(ExprKind::Prim, sp);
    e->op = op;
    e->kids = std::move(kids);
    return e;
}
} // namespace

ExprPtr deref(ExprPtr x, Span sp) { return prim_node(PrimOpKind::Deref, {std::move(x)}, sp); }
ExprPtr assign(ExprPtr l, ExprPtr r, Span sp) { return prim_node(PrimOpKind::Assign, {std::move(l), std::move(r)}, sp); }
ExprPtr ref(ExprPtr x, Span sp) { return prim_node(PrimOpKind::Ref, {std::move(x)}, sp); }

ExprPtr uop(UnOp op, ExprPtr x, Span sp) {
    auto e = prim_node(PrimOpKind::Uop, {std::move(x)}, sp);
    e->uop = op;
    return e;
}

ExprPtr cast(PrimTy target, ExprPtr x, Span sp) { return uop(UnOp{UnOpKind::Cast, target}, std::move(x), sp); }

ExprPtr bop(BinOp op, ExprPtr a, ExprPtr b, Span sp) {
    auto e = prim_node(PrimOpKind::Bop, {std::move(a), std::move(b)}, sp);
    e->bop = op;
    return e;
}

ExprPtr let(std::string x, std::optional<Ty> t, ExprPtr bound, ExprPtr body, Span sp) {
    auto e = node(ExprKind::Let, sp);
    e->name = std::move(x);
    e->ty = std::move(t);
    e->kids = {std::move(bound), std::move(body)};
    return e;
}

ExprPtr cond(ExprPtr g, ExprPtr t, ExprPtr f, Span sp) {
    auto e = node(ExprKind::Cond, sp);
    e->kids = {std::move(g), std::move(t), std::move(f)};
    return e;
}

ExprPtr struct_init(std::string id, std::vector<std::string> fields, std::vector<ExprPtr> vals, Span sp) {
    auto e = node(ExprKind::StructInit, sp);
    e->name = std::move(id);
    e->field_names = std::move(fields);
    e->kids = std::move(vals);
    return e;
}

ExprPtr field(ExprPtr target, std::string f, Span sp) {
    auto e = node(ExprKind::Field, sp);
    e->name = std::move(f);
    e->kids = {std::move(target)};
    return e;
}

ExprPtr none(std::optional<Ty> t, Span sp) {
    auto e = node(ExprKind::NoneLit, sp);
    e->ty = std::move(t);
    return e;
}

ExprPtr some(ExprPtr x, Span sp) {
    auto e = node(ExprKind::SomeLit, sp);
    e->kids = {std::move(x)};
    return e;
}

ExprPtr match(ExprPtr scrutinee, std::vector<Arm> arms, Span sp) {
    auto e = node(ExprKind::Match, sp);
    e->kids = {std::move(scrutinee)};
    e->arms = std::move(arms);
    return e;
}

ExprPtr for_(ExprPtr lo, ExprPtr hi, Dir d, ExprPtr body, Span sp) {
    auto e = node(ExprKind::For, sp);
    e->dir = d;
    e->kids = {std::move(lo), std::move(hi), std::move(body)};
    return e;
}

ExprPtr loc(uint64_t block, int64_t offset) {
    auto e = node(ExprKind::Loc, {});
    e->block = block;
    e->ival = offset;
    return e;
}

ExprPtr bytes_val(uint64_t block, int64_t offset, uint64_t len) {
    auto e = node(ExprKind::BytesVal, {});
    e->block = block;
    e->ival = offset;
    e->len = len;
    return e;
}

ExprPtr struct_val(uint64_t block, int64_t offset, std::string id) {
    auto e = node(ExprKind::StructVal, {});
    e->block = block;
    e->ival = offset;
    e->name = std::move(id);
    return e;
}

ExprPtr repeat(int64_t remaining, ExprPtr tmpl, ExprPtr current) {
    auto e = node(ExprKind::Repeat, {});
    e->ival = remaining;
    e->kids = {std::move(tmpl), std::move(current)};
    return e;
}

ExprPtr undef() { return node(ExprKind::Undef, {}); }

} // namespace mk

ExprPtr with_kid(const Expr& e, std::size_t i, ExprPtr k) {
    auto c = std::make_shared<Expr>(e);
    c->kids[i] = std::move(k);
    c->annot.reset();
    return c;
}

ExprPtr with_arm_body(const Expr& e, std::size_t i, ExprPtr body) {
    auto c = std::make_shared<Expr>(e);
    c->arms[i].body = std::move(body);
    c->annot.reset();
    return c;
}

bool is_value(const Expr& e) {
    switch (e.kind) {
    case ExprKind::ConstInt:
    case ExprKind::ConstLong:
    case ExprKind::ConstBool:
    case ExprKind::UnitLit:
    case ExprKind::NoneLit:
    case ExprKind::Loc:
    case ExprKind::BytesVal:
    case ExprKind::StructVal:
    case ExprKind::Undef: return true;
    case ExprKind::SomeLit: return e.kids[0]->kind == ExprKind::Loc;
    default: return false;
    }
}

bool is_internal(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Loc:
    case ExprKind::BytesVal:
    case ExprKind::StructVal:
    case ExprKind::Repeat:
    case ExprKind::Undef: return true;
    default: return false;
    }
}

bool contains_internal(const Expr& e) {
    if (is_internal(e)) return true;
    for (const auto& k : e.kids)
        if (contains_internal(*k)) return true;
    for (const auto& a : e.arms)
        if (contains_internal(*a.body)) return true;
    return false;
}

namespace {

void collect_fvar(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
    case ExprKind::Var: out.insert(e.name); return;
    case ExprKind::App:
        // The callee names a declaration, not a variable.
        for (std::size_t i = 1; i < e.kids.size(); ++i) collect_fvar(*e.kids[i], out);
        if (e.kids[0]->kind != ExprKind::Var) collect_fvar(*e.kids[0], out);
        return;
    case ExprKind::Let: {
        collect_fvar(*e.kids[0], out);
        std::set<std::string> body;
        collect_fvar(*e.kids[1], body);
        body.erase(e.name);
        out.insert(body.begin(), body.end());
        return;
    }
    case ExprKind::Match: {
        collect_fvar(*e.kids[0], out);
        for (const auto& arm : e.arms) {
            std::set<std::string> body;
            collect_fvar(*arm.body, body);
            if (arm.pat.kind == Pattern::Kind::Some || arm.pat.kind == Pattern::Kind::Bytes) body.erase(arm.pat.binder);
            for (const auto& f : arm.pat.fields) body.erase(f.name);
            out.insert(body.begin(), body.end());
        }
        return;
    }
    default:
        for (const auto& k : e.kids) collect_fvar(*k, out);
    }
}

} // namespace

std::set<std::string> fvar(const Expr& e) {
    std::set<std::string> out;
    collect_fvar(e, out);
    return out;
}

} // namespace beepl
