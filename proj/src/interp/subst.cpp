// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/interp.hpp"

namespace beepl {

namespace {

bool pattern_binds(const Pattern& p, const std::string& x) {
    switch (p.kind) {
    case Pattern::Kind::Some: return p.binder == x;
    case Pattern::Kind::Bytes:
        if (p.binder == x) return true;
        for (const auto& f : p.fields)
            if (f.name == x) return true;
        return false;
    default: return false;
    }
}

// Returns nullptr when e is unchanged, so untouched subtrees stay shared.
ExprPtr go(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
    switch (e->kind) {
    case ExprKind::Var: return e->name == x ? v : nullptr;
    case ExprKind::ConstInt:
    case ExprKind::ConstLong:
    case ExprKind::ConstBool:
    case ExprKind::UnitLit:
    case ExprKind::NoneLit:
    case ExprKind::Loc:
    case ExprKind::BytesVal:
    case ExprKind::StructVal:
    case ExprKind::Undef: return nullptr;
    default: break;
    }
    std::shared_ptr<Expr> out;
    auto touch = [&]() -> Expr& {
        if (!out) {
            out = std::make_shared<Expr>(*e);
            out->annot.reset();
        }
        return *out;
    };
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (e->kind == ExprKind::App && i == 0) continue; // callee names live in Δ
        if (e->kind == ExprKind::Let && i == 1 && e->name == x) break;
        if (ExprPtr k = go(e->kids[i], x, v)) touch().kids[i] = std::move(k);
    }
    for (std::size_t i = 0; i < e->arms.size(); ++i) {
        if (pattern_binds(e->arms[i].pat, x)) continue;
        if (ExprPtr b = go(e->arms[i].body, x, v)) touch().arms[i].body = std::move(b);
    }
    return out;
}

} // namespace

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
    ExprPtr r = go(e, x, v);
    return r ? r : e;
}

} // namespace beepl
