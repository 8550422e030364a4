// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <functional>

#include "beepl/typecheck.hpp"

namespace beepl {

bool is_poly(const Expr& e) {
    switch (e.kind) {
    case ExprKind::ConstInt:
    case ExprKind::ConstLong: return e.polymorphic;
    case ExprKind::Prim:
        if (e.op == PrimOpKind::Uop)
            return (e.uop.kind == UnOpKind::Neg || e.uop.kind == UnOpKind::BitNot) && is_poly(*e.kids[0]);
        if (e.op == PrimOpKind::Bop)
            return !is_comparison(e.bop) && !is_logical(e.bop) && is_poly(*e.kids[0]) && is_poly(*e.kids[1]);
        return false;
    case ExprKind::Cond: return is_poly(*e.kids[1]) && is_poly(*e.kids[2]);
    default: return false;
    }
}

namespace {

struct Res {
    Ty ty;
    Effect eff;
    ExprPtr e;
    Derivation d;
};

bool literal_fits(const Expr& lit, const PrimTy& t) {
    if (!t.is_integer()) return false;
    const bool unsigned64 = lit.lit_ty.kind == PrimTy::Kind::Long && !lit.lit_ty.is_signed();
    if (!unsigned64 && lit.ival < 0) return t.is_signed() && lit.ival >= t.min_value();
    return static_cast<uint64_t>(lit.ival) <= t.max_value();
}

int width_rank(const Ty& t) {
    if (!t.is_integer()) return -1;
    return t.prim().bits * 2 + (t.prim().is_signed() ? 0 : 1);
}

bool is_pointerish(const Ty& t) { return t.is_pointer() || t.is(Ty::Kind::Option); }

class Checker {
  public:
    Checker(const TypingContext& ctx, bool build, bool deriv) : ctx_(ctx), build_(build), deriv_(deriv) {}

    Res check(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        switch (e.kind) {
        case ExprKind::Var: return var(ep);
        case ExprKind::ConstInt:
        case ExprKind::ConstLong: return literal(ep, hint);
        case ExprKind::ConstBool: return leaf(ep, Ty::boolean(), "TCONSTB");
        case ExprKind::UnitLit: return leaf(ep, Ty::unit(), "TUNIT");
        case ExprKind::Loc: {
            auto it = ctx_.sigma.find(e.block);
            if (it == ctx_.sigma.end())
                fail("UnknownLocation", "location " + std::to_string(e.block) + " is not in the store typing", e,
                     "TLOC");
            return leaf(ep, it->second, "TLOC");
        }
        case ExprKind::BytesVal: return leaf(ep, Ty::bytes(), "TBYTES");
        case ExprKind::StructVal:
            require_struct(e.name, e);
            return leaf(ep, Ty::struct_(e.name), "TSTRUCTV");
        case ExprKind::Undef: fail("UndefValue", "undefined value reached", e, "");
        case ExprKind::App: return app(ep);
        case ExprKind::Prim: return prim(ep, hint);
        case ExprKind::Let: return let(ep, hint);
        case ExprKind::Cond: return cond(ep, hint);
        case ExprKind::StructInit: return struct_init(ep);
        case ExprKind::Field: return field(ep);
        case ExprKind::NoneLit: return none(ep, hint);
        case ExprKind::SomeLit: return some(ep, hint);
        case ExprKind::Match: return match(ep, hint);
        case ExprKind::For: return for_loop(ep);
        case ExprKind::Repeat: return repeat(ep);
        }
        fail("TypeMismatch", "unsupported expression", e, "");
    }

    std::vector<std::pair<std::string, Ty>> scope;

  private:
    const TypingContext& ctx_;
    bool build_;
    bool deriv_;

    [[noreturn]] static void fail(const std::string& code, const std::string& msg, const Expr& e,
                                  const std::string& rule) {
        throw CompileError(code, msg, e.span, rule);
    }

    static std::string ts(const Ty& t) { return to_string(t); }

    Derivation node(const std::string& rule, const Ty& t, const Effect& eff, const ExprPtr& e,
                    std::vector<Res*> prem = {}) const {
        Derivation d;
        if (!deriv_) return d;
        d.rule = rule;
        d.ty = t;
        d.eff = eff;
        d.expr = e;
        for (Res* r : prem) d.premises.push_back(std::move(r->d));
        return d;
    }

    ExprPtr rebuild(const ExprPtr& ep, const std::vector<Res*>& kids, const Ty& t) const {
        if (!build_) return nullptr;
        auto n = std::make_shared<Expr>(*ep);
        for (std::size_t i = 0; i < kids.size(); ++i) n->kids[i] = kids[i]->e;
        n->annot = t;
        return n;
    }

    Res leaf(const ExprPtr& ep, const Ty& t, const std::string& rule) const {
        Res r{t, {}, nullptr, {}};
        if (build_) {
            auto n = std::make_shared<Expr>(*ep);
            n->annot = t;
            r.e = n;
        }
        r.d = node(rule, t, {}, r.e ? r.e : ep);
        return r;
    }

    void require_struct(const std::string& id, const Expr& e) const {
        if (!ctx_.pi.count(id)) fail("UnknownStruct", "unknown struct '" + id + "'", e, "");
    }

    const Ty* lookup_local(const std::string& x) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == x) return &it->second;
        auto g = ctx_.gamma.find(x);
        return g == ctx_.gamma.end() ? nullptr : &g->second;
    }

    bool is_global_name(const std::string& x) const {
        return ctx_.globals.count(x) || ctx_.funs.count(x) || ctx_.later_funs.count(x) || ctx_.psi.count(x) ||
               ctx_.constants.count(x);
    }

    Res var(const ExprPtr& ep) {
        const Expr& e = *ep;
        if (e.name == "_") fail("UnboundVariable", "'_' cannot be referenced", e, "TVAR");
        if (const Ty* t = lookup_local(e.name)) return leaf(ep, *t, "TVAR");
        if (auto g = ctx_.globals.find(e.name); g != ctx_.globals.end()) {
            if (g->second.is(Ty::Kind::Array))
                fail("TypeMismatch", "array global '" + e.name + "' cannot be used as a value", e, "TVAR");
            return leaf(ep, g->second, "TVAR");
        }
        if (auto c = ctx_.constants.find(e.name); c != ctx_.constants.end()) {
            const Ty t = Ty::prim(c->second.ty);
            Res r{t, {}, nullptr, {}};
            if (build_) {
                auto n = std::make_shared<Expr>(*mk::int_lit(c->second.value, c->second.ty, false, e.span));
                n->annot = t;
                r.e = n;
            }
            r.d = node("TCONST", t, {}, r.e ? r.e : ep);
            return r;
        }
        if (ctx_.funs.count(e.name) || ctx_.psi.count(e.name))
            fail("TypeMismatch", "function '" + e.name + "' used as a value", e, "TVAR");
        fail("UnboundVariable", "unbound variable '" + e.name + "'", e, "TVAR");
    }

    Res literal(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        PrimTy t = e.lit_ty;
        if (e.polymorphic && hint && hint->is_integer()) {
            if (!literal_fits(e, hint->prim()))
                fail("LiteralOutOfRange", "literal does not fit in " + ts(*hint), e, "TCONSTI");
            t = hint->prim();
        }
        const Ty ty = Ty::prim(t);
        const std::string rule = t.kind == PrimTy::Kind::Long ? "TCONSTL" : "TCONSTI";
        Res r{ty, {}, nullptr, {}};
        if (build_) {
            auto n = std::make_shared<Expr>(*mk::int_lit(e.ival, t, false, e.span));
            n->annot = ty;
            r.e = n;
        }
        r.d = node(rule, ty, {}, r.e ? r.e : ep);
        return r;
    }

    // Checks a group of expressions that must share one integer type. Non-polymorphic members fix the
    // type for the polymorphic ones; an all-polymorphic group widens to its widest default.
    std::vector<Res> joint(const std::vector<std::function<Res(const std::optional<Ty>&)>>& thunks,
                           const std::vector<bool>& poly, const std::optional<Ty>& hint) {
        std::vector<Res> out(thunks.size());
        std::optional<Ty> h = hint;
        bool any_fixed = false;
        for (std::size_t i = 0; i < thunks.size(); ++i) {
            if (poly[i]) continue;
            out[i] = thunks[i](h);
            if (!h) h = out[i].ty;
            any_fixed = true;
        }
        if (any_fixed || hint) {
            for (std::size_t i = 0; i < thunks.size(); ++i)
                if (poly[i]) out[i] = thunks[i](h);
            return out;
        }
        for (std::size_t i = 0; i < thunks.size(); ++i) out[i] = thunks[i](std::nullopt);
        const Res* widest = &out[0];
        bool differ = false;
        for (const auto& r : out) {
            if (r.ty != out[0].ty) differ = true;
            if (width_rank(r.ty) > width_rank(widest->ty)) widest = &r;
        }
        if (differ && widest->ty.is_integer()) {
            const Ty w = widest->ty;
            for (std::size_t i = 0; i < thunks.size(); ++i) out[i] = thunks[i](w);
        }
        return out;
    }

    Res app(const ExprPtr& ep) {
        const Expr& e = *ep;
        const Expr& callee = *e.kids[0];
        if (callee.kind != ExprKind::Var) fail("TypeMismatch", "callee must be a function name", e, "TAPP");
        const std::string& f = callee.name;
        std::vector<Ty> params;
        Effect eff;
        Ty ret;
        bool external = false;
        if (lookup_local(f)) fail("TypeMismatch", "'" + f + "' is not a function", e, "TAPP");
        if (auto it = ctx_.funs.find(f); it != ctx_.funs.end()) {
            params = it->second.args;
            eff = it->second.eff;
            ret = it->second.ret;
        } else if (ctx_.later_funs.count(f)) {
            fail("ForwardCall", "call to '" + f + "' before its declaration", e, "TAPP");
        } else if (auto x = ctx_.psi.find(f); x != ctx_.psi.end()) {
            params = x->second.args;
            eff = x->second.eff;
            ret = x->second.ret;
            external = true;
        } else {
            fail("UnknownHelper", "unknown function '" + f + "'", e, "TAPP");
        }
        const std::size_t n = e.kids.size() - 1;
        if (n != params.size())
            fail("ArgArityMismatch",
                 "'" + f + "' expects " + std::to_string(params.size()) + " argument(s), got " + std::to_string(n), e,
                 "TAPP");
        std::vector<Res> args;
        args.reserve(n);
        Effect total;
        for (std::size_t i = 0; i < n; ++i) {
            Res a = check(e.kids[i + 1], params[i]);
            if (a.ty != params[i]) {
                const bool lift = external && params[i].is(Ty::Kind::Option) && a.ty == params[i].inner();
                if (!lift)
                    fail("TypeMismatch",
                         "argument " + std::to_string(i + 1) + " of '" + f + "' has type " + ts(a.ty) +
                             ", expected " + ts(params[i]),
                         *e.kids[i + 1], "TAPP");
                if (build_) {
                    auto s = std::make_shared<Expr>(*mk::some(a.e, e.kids[i + 1]->span));
                    s->annot = params[i];
                    a.e = s;
                }
                a.ty = params[i];
            }
            total = effect_concat(total, a.eff);
            args.push_back(std::move(a));
        }
        total = effect_concat(total, eff);
        Res r{ret, total, nullptr, {}};
        if (build_) {
            auto nn = std::make_shared<Expr>(e);
            auto c = std::make_shared<Expr>(callee);
            c->annot = Ty::fun(params, eff, ret);
            nn->kids[0] = c;
            for (std::size_t i = 0; i < n; ++i) nn->kids[i + 1] = args[i].e;
            nn->annot = ret;
            r.e = nn;
        }
        std::vector<Res*> prem;
        for (auto& a : args) prem.push_back(&a);
        r.d = node("TAPP", ret, total, r.e ? r.e : ep, prem);
        return r;
    }

    Res prim(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        switch (e.op) {
        case PrimOpKind::Deref: {
            std::optional<Ty> h;
            if (hint && (hint->is_prim() || hint->is(Ty::Kind::Struct))) h = Ty::ref(*hint);
            Res a = check(e.kids[0], h);
            if (a.ty.is(Ty::Kind::Option))
                fail("DerefOfOption", "dereference of possibly-null pointer of type " + ts(a.ty), e, "TDEREF");
            if (!a.ty.is(Ty::Kind::Ref)) fail("TypeMismatch", "dereference of non-pointer " + ts(a.ty), e, "TDEREF");
            const Ty t = a.ty.inner();
            const Effect eff = effect_concat({EffectAtom::Read}, a.eff);
            return finish(ep, "TDEREF", t, eff, {&a});
        }
        case PrimOpKind::Ref: {
            std::optional<Ty> h;
            if (hint && hint->is(Ty::Kind::Ref)) h = hint->inner();
            Res a = check(e.kids[0], h);
            if (!(a.ty.is_prim() || a.ty.is(Ty::Kind::Struct)))
                fail("TypeMismatch", "cannot allocate a cell of type " + ts(a.ty), e, "TREF");
            const Ty t = Ty::ref(a.ty);
            const Effect eff = effect_concat({EffectAtom::Alloc}, a.eff);
            return finish(ep, "TREF", t, eff, {&a});
        }
        case PrimOpKind::Assign: {
            Res a = check(e.kids[0], std::nullopt);
            if (a.ty.is(Ty::Kind::Option))
                fail("DerefOfOption", "assignment through possibly-null pointer of type " + ts(a.ty), e, "TMASSGN");
            if (!a.ty.is(Ty::Kind::Ref)) fail("TypeMismatch", "assignment to non-pointer " + ts(a.ty), e, "TMASSGN");
            Res b = check(e.kids[1], a.ty.inner());
            if (b.ty != a.ty.inner())
                fail("TypeMismatch", "cannot store " + ts(b.ty) + " into " + ts(a.ty), e, "TMASSGN");
            const Effect eff = effect_concat(effect_concat(a.eff, b.eff), {EffectAtom::Write});
            return finish(ep, "TMASSGN", Ty::unit(), eff, {&a, &b});
        }
        case PrimOpKind::Uop: return uop(ep, hint);
        case PrimOpKind::Bop: return bop(ep, hint);
        }
        fail("TypeMismatch", "unsupported primitive", e, "");
    }

    Res finish(const ExprPtr& ep, const std::string& rule, const Ty& t, const Effect& eff, std::vector<Res*> kids) {
        Res r{t, eff, rebuild(ep, kids, t), {}};
        r.d = node(rule, t, eff, r.e ? r.e : ep, std::move(kids));
        return r;
    }

    Res uop(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        switch (e.uop.kind) {
        case UnOpKind::LogNot: {
            Res a = check(e.kids[0], Ty::boolean());
            if (!a.ty.is_bool()) fail("TypeMismatch", "'not' expects bool, got " + ts(a.ty), e, "TUOP");
            return finish(ep, "TUOP", a.ty, a.eff, {&a});
        }
        case UnOpKind::Neg:
        case UnOpKind::BitNot: {
            Res a = check(e.kids[0], hint);
            if (is_pointerish(a.ty)) fail("PointerArithmetic", "arithmetic on pointer type " + ts(a.ty), e, "TUOP");
            if (!a.ty.is_integer()) fail("TypeMismatch", "integer operand expected, got " + ts(a.ty), e, "TUOP");
            return finish(ep, "TUOP", a.ty, a.eff, {&a});
        }
        case UnOpKind::Cast: {
            Res a = check(e.kids[0], std::nullopt);
            if (is_pointerish(a.ty)) fail("PointerArithmetic", "cannot cast pointer type " + ts(a.ty), e, "TUOP");
            if (!a.ty.is_integer() || !e.uop.target.is_integer())
                fail("TypeMismatch", "cast between non-integer types", e, "TUOP");
            return finish(ep, "TUOP", Ty::prim(e.uop.target), a.eff, {&a});
        }
        }
        fail("TypeMismatch", "unsupported unary operator", e, "TUOP");
    }

    Res bop(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        if (is_logical(e.bop)) {
            Res a = check(e.kids[0], Ty::boolean());
            Res b = check(e.kids[1], Ty::boolean());
            if (!a.ty.is_bool() || !b.ty.is_bool())
                fail("TypeMismatch", "'" + to_string(e.bop) + "' expects bool operands", e, "TBOP");
            return finish(ep, "TBOP", Ty::boolean(), effect_concat(a.eff, b.eff), {&a, &b});
        }
        const bool cmp = is_comparison(e.bop);
        auto rs = joint({[&](const std::optional<Ty>& h) { return check(e.kids[0], h); },
                         [&](const std::optional<Ty>& h) { return check(e.kids[1], h); }},
                        {is_poly(*e.kids[0]), is_poly(*e.kids[1])}, cmp ? std::nullopt : hint);
        Res& a = rs[0];
        Res& b = rs[1];
        if (is_pointerish(a.ty) || is_pointerish(b.ty))
            fail("PointerArithmetic", "operator '" + to_string(e.bop) + "' applied to pointer type", e, "TBOP");
        const bool eq = e.bop == BinOp::Eq || e.bop == BinOp::Ne;
        const bool ok_kind = a.ty.is_integer() || (eq && a.ty.is_bool());
        if (!ok_kind || a.ty != b.ty)
            fail("TypeMismatch",
                 "operator '" + to_string(e.bop) + "' applied to " + ts(a.ty) + " and " + ts(b.ty), e, "TBOP");
        return finish(ep, "TBOP", cmp ? Ty::boolean() : a.ty, effect_concat(a.eff, b.eff), {&a, &b});
    }

    void check_binder(const std::string& x, const Expr& e, const std::string& rule) const {
        if (x != "_" && is_global_name(x))
            fail("DuplicateName", "binder '" + x + "' collides with a global declaration", e, rule);
    }

    Res let(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        check_binder(e.name, e, "TBIND");
        if (e.ty) {
            validate_type(*e.ty, ctx_.pi, e.span);
            if (e.ty->is(Ty::Kind::Array)) fail("TypeMismatch", "let binder cannot have array type", e, "TBIND");
        }
        Res a = check(e.kids[0], e.ty);
        if (e.ty && a.ty != *e.ty)
            fail("TypeMismatch", "'" + e.name + "' declared " + ts(*e.ty) + " but bound to " + ts(a.ty), e, "TBIND");
        const Ty bt = e.ty ? *e.ty : a.ty;
        const bool push = e.name != "_";
        if (push) scope.emplace_back(e.name, bt);
        Res b = check(e.kids[1], hint);
        if (push) scope.pop_back();
        const Effect eff = effect_concat(a.eff, b.eff);
        Res r{b.ty, eff, nullptr, {}};
        if (build_) {
            auto n = std::make_shared<Expr>(e);
            n->kids = {a.e, b.e};
            n->ty = bt;
            n->annot = b.ty;
            r.e = n;
        }
        r.d = node("TBIND", b.ty, eff, r.e ? r.e : ep, {&a, &b});
        return r;
    }

    Res cond(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        Res g = check(e.kids[0], Ty::boolean());
        if (!g.ty.is_bool()) fail("TypeMismatch", "condition has type " + ts(g.ty) + ", expected bool", e, "TCOND");
        auto rs = joint({[&](const std::optional<Ty>& h) { return check(e.kids[1], h); },
                         [&](const std::optional<Ty>& h) { return check(e.kids[2], h); }},
                        {is_poly(*e.kids[1]), is_poly(*e.kids[2])}, hint);
        if (rs[0].ty != rs[1].ty)
            fail("BranchTypeMismatch", "branches have types " + ts(rs[0].ty) + " and " + ts(rs[1].ty), e, "TCOND");
        const Effect eff = effect_concat(effect_concat(g.eff, rs[0].eff), rs[1].eff);
        return finish(ep, "TCOND", rs[0].ty, eff, {&g, &rs[0], &rs[1]});
    }

    Res struct_init(const ExprPtr& ep) {
        const Expr& e = *ep;
        require_struct(e.name, e);
        const Composite& c = ctx_.pi.at(e.name);
        if (c.fields.size() != e.field_names.size())
            fail("FieldMismatch", "struct " + e.name + " initialiser must list all " + std::to_string(c.fields.size()) +
                                      " field(s) in order",
                 e, "TSINIT");
        std::vector<Res> vals;
        Effect eff;
        for (std::size_t i = 0; i < c.fields.size(); ++i) {
            if (c.fields[i].name != e.field_names[i])
                fail("FieldMismatch",
                     "expected field '" + c.fields[i].name + "', found '" + e.field_names[i] + "'", e, "TSINIT");
            if (!c.fields[i].ty.is_prim())
                fail("FieldMismatch", "field '" + c.fields[i].name + "' cannot be initialised", e, "TSINIT");
            Res v = check(e.kids[i], c.fields[i].ty);
            if (v.ty != c.fields[i].ty)
                fail("TypeMismatch",
                     "field '" + c.fields[i].name + "' expects " + ts(c.fields[i].ty) + ", got " + ts(v.ty),
                     *e.kids[i], "TSINIT");
            eff = effect_concat(eff, v.eff);
            vals.push_back(std::move(v));
        }
        std::vector<Res*> prem;
        for (auto& v : vals) prem.push_back(&v);
        return finish(ep, "TSINIT", Ty::struct_(e.name), eff, prem);
    }

    Res field(const ExprPtr& ep) {
        const Expr& e = *ep;
        Res a = check(e.kids[0], std::nullopt);
        if (a.ty.is(Ty::Kind::Option))
            fail("DerefOfOption", "field access through possibly-null pointer of type " + ts(a.ty), e, "TFIELD");
        std::string id;
        if (a.ty.is(Ty::Kind::Struct)) id = a.ty.struct_id();
        else if (a.ty.is(Ty::Kind::Ref) && a.ty.inner().is(Ty::Kind::Struct)) id = a.ty.inner().struct_id();
        else fail("TypeMismatch", "field access on non-struct type " + ts(a.ty), e, "TFIELD");
        require_struct(id, e);
        const Composite& c = ctx_.pi.at(id);
        auto it = std::find_if(c.fields.begin(), c.fields.end(), [&](const Field& f) { return f.name == e.name; });
        if (it == c.fields.end()) fail("FieldMismatch", "struct " + id + " has no field '" + e.name + "'", e, "TFIELD");
        if (it->ty.is(Ty::Kind::Array))
            fail("FieldMismatch", "array field '" + e.name + "' cannot be read as a value", e, "TFIELD");
        const Effect eff = a.ty.is(Ty::Kind::Ref) ? effect_concat(a.eff, {EffectAtom::Read}) : a.eff;
        return finish(ep, "TFIELD", it->ty, eff, {&a});
    }

    Res none(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        std::optional<Ty> t = e.ty;
        if (t) {
            validate_type(*t, ctx_.pi, e.span);
            if (!t->is(Ty::Kind::Option)) fail("TypeMismatch", "none must have an option type", e, "TNONE");
        } else if (hint && hint->is(Ty::Kind::Option)) {
            t = hint;
        } else {
            fail("TypeMismatch", "cannot infer the type of 'none'", e, "TNONE");
        }
        Res r{*t, {}, nullptr, {}};
        if (build_) {
            auto n = std::make_shared<Expr>(e);
            n->ty = *t;
            n->annot = *t;
            r.e = n;
        }
        r.d = node("TNONE", *t, {}, r.e ? r.e : ep);
        return r;
    }

    Res some(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        std::optional<Ty> h;
        if (hint && hint->is(Ty::Kind::Option)) h = hint->inner();
        Res a = check(e.kids[0], h);
        if (!a.ty.is_pointer()) fail("TypeMismatch", "some(...) expects a pointer, got " + ts(a.ty), e, "TSOME");
        return finish(ep, "TSOME", Ty::option(a.ty), a.eff, {&a});
    }

    Res match(const ExprPtr& ep, const std::optional<Ty>& hint) {
        const Expr& e = *ep;
        Res m = check(e.kids[0], std::nullopt);
        std::string rule;
        std::vector<std::optional<std::pair<std::string, Ty>>> binder(e.arms.size());
        std::vector<std::vector<std::pair<std::string, Ty>>> extra(e.arms.size());
        if (m.ty.is(Ty::Kind::Option)) {
            rule = "TMATCHO";
            int nnone = 0, nsome = 0, nwild = 0;
            for (std::size_t i = 0; i < e.arms.size(); ++i) {
                const Pattern& p = e.arms[i].pat;
                switch (p.kind) {
                case Pattern::Kind::None: ++nnone; break;
                case Pattern::Kind::Some:
                    ++nsome;
                    check_binder(p.binder, e, rule);
                    extra[i].emplace_back(p.binder, m.ty.inner());
                    break;
                case Pattern::Kind::Wild: ++nwild; break;
                case Pattern::Kind::Bytes:
                    fail("TypeMismatch", "bytes pattern on option scrutinee", e, rule);
                }
            }
            const bool ok = e.arms.size() == 2 && nnone <= 1 && nsome <= 1 && nwild <= 1;
            if (!ok)
                fail("NonExhaustiveOptionMatch", "option match needs exactly one pnone and one psome arm", e, rule);
        } else if (m.ty.is(Ty::Kind::Bytes)) {
            rule = "TMATCHB";
            int nbytes = 0, nwild = 0;
            for (std::size_t i = 0; i < e.arms.size(); ++i) {
                const Pattern& p = e.arms[i].pat;
                if (p.kind == Pattern::Kind::Wild) {
                    ++nwild;
                } else if (p.kind == Pattern::Kind::Bytes) {
                    ++nbytes;
                    extra[i] = bytes_binders(p, e);
                } else {
                    fail("TypeMismatch", "option pattern on bytes scrutinee", e, rule);
                }
            }
            if (e.arms.size() != 2 || nbytes != 1 || nwild != 1 || e.arms[1].pat.kind != Pattern::Kind::Wild)
                fail("NonExhaustiveBytesMatch", "bytes match needs an extraction arm followed by a '_' arm", e, rule);
        } else {
            fail("TypeMismatch", "cannot match on a value of type " + ts(m.ty), e, "TMATCHO");
        }

        std::vector<std::function<Res(const std::optional<Ty>&)>> thunks;
        std::vector<bool> poly;
        for (std::size_t i = 0; i < e.arms.size(); ++i) {
            thunks.emplace_back([&, i](const std::optional<Ty>& h) {
                const std::size_t mark = scope.size();
                for (const auto& b : extra[i]) scope.push_back(b);
                Res r = check(e.arms[i].body, h);
                scope.resize(mark);
                return r;
            });
            poly.push_back(is_poly(*e.arms[i].body));
        }
        auto rs = joint(thunks, poly, hint);
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (rs[i].ty != rs[0].ty)
                fail("BranchTypeMismatch", "match arms have types " + ts(rs[0].ty) + " and " + ts(rs[i].ty), e, rule);
        Effect eff = m.eff;
        for (const auto& r : rs) eff = effect_concat(eff, r.eff);
        Res out{rs[0].ty, eff, nullptr, {}};
        if (build_) {
            auto n = std::make_shared<Expr>(e);
            n->kids = {m.e};
            for (std::size_t i = 0; i < rs.size(); ++i) n->arms[i].body = rs[i].e;
            n->annot = out.ty;
            out.e = n;
        }
        std::vector<Res*> prem{&m};
        for (auto& r : rs) prem.push_back(&r);
        out.d = node(rule, out.ty, eff, out.e ? out.e : ep, prem);
        return out;
    }

    std::vector<std::pair<std::string, Ty>> bytes_binders(const Pattern& p, const Expr& e) const {
        validate_type(p.target, ctx_.pi, e.span);
        std::vector<std::pair<std::string, Ty>> bs;
        std::set<std::string> seen;
        auto add = [&](const std::string& x, const Ty& t) {
            check_binder(x, e, "TMATCHB");
            if (!seen.insert(x).second) fail("DuplicateName", "binder '" + x + "' bound twice", e, "TMATCHB");
            bs.emplace_back(x, t);
        };
        add(p.binder, p.target);
        if (p.target.is_integer()) {
            if (!p.fields.empty()) fail("FieldMismatch", "primitive extraction has no fields", e, "TMATCHB");
            return bs;
        }
        if (!p.target.is(Ty::Kind::Struct))
            fail("TypeMismatch", "cannot extract " + ts(p.target) + " from bytes", e, "TMATCHB");
        const Composite& c = ctx_.pi.at(p.target.struct_id());
        for (const auto& f : c.fields)
            if (!(f.ty.is_prim() || f.ty.is(Ty::Kind::Array)))
                fail("TypeMismatch", "struct " + c.id + " has a non-scalar field '" + f.name + "'", e, "TMATCHB");
        for (const auto& fb : p.fields) {
            auto it = std::find_if(c.fields.begin(), c.fields.end(), [&](const Field& f) { return f.name == fb.name; });
            if (it == c.fields.end())
                fail("FieldMismatch", "struct " + c.id + " has no field '" + fb.name + "'", e, "TMATCHB");
            if (!it->ty.is_prim() || it->ty != fb.ty)
                fail("FieldMismatch", "field '" + fb.name + "' of struct " + c.id + " has type " + ts(it->ty), e,
                     "TMATCHB");
            add(fb.name, fb.ty);
        }
        return bs;
    }

    Res for_loop(const ExprPtr& ep) {
        const Expr& e = *ep;
        auto rs = joint({[&](const std::optional<Ty>& h) { return check(e.kids[0], h); },
                         [&](const std::optional<Ty>& h) { return check(e.kids[1], h); }},
                        {is_poly(*e.kids[0]), is_poly(*e.kids[1])}, std::nullopt);
        if (is_pointerish(rs[0].ty) || is_pointerish(rs[1].ty))
            fail("PointerArithmetic", "loop bounds cannot be pointers", e, "TFOR");
        if (!rs[0].ty.is_integer() || rs[0].ty != rs[1].ty)
            fail("TypeMismatch", "loop bounds have types " + ts(rs[0].ty) + " and " + ts(rs[1].ty), e, "TFOR");
        Res body = check(e.kids[2], std::nullopt);
        std::set<std::string> bound = fvar(*e.kids[0]);
        for (const auto& x : fvar(*e.kids[1])) bound.insert(x);
        for (const auto& x : fvar(*e.kids[2])) {
            if (!bound.count(x)) continue;
            if (!lookup_local(x) && ctx_.constants.count(x)) continue;
            fail("ForBodyCapturesBounds", "loop body mentions '" + x + "', which occurs in the bounds", e, "TFOR");
        }
        const Effect eff = effect_concat(effect_concat(rs[0].eff, rs[1].eff), body.eff);
        return finish(ep, "TFOR", Ty::unit(), eff, {&rs[0], &rs[1], &body});
    }

    Res repeat(const ExprPtr& ep) {
        const Expr& e = *ep;
        Res t = check(e.kids[0], std::nullopt);
        Res c = check(e.kids[1], std::nullopt);
        return finish(ep, "TREPEAT", Ty::unit(), effect_concat(t.eff, c.eff), {&t, &c});
    }
};

} // namespace

std::pair<Ty, Effect> infer_expr(const TypingContext& ctx, const ExprPtr& e) {
    Checker c(ctx, false, false);
    Res r = c.check(e, std::nullopt);
    return {r.ty, r.eff};
}

Typing elaborate_expr(const TypingContext& ctx, const ExprPtr& e, const std::optional<Ty>& hint,
                      bool with_derivation) {
    Checker c(ctx, true, with_derivation);
    Res r = c.check(e, hint);
    Typing t{r.ty, r.eff, r.e, nullptr};
    if (with_derivation) t.derivation = std::make_shared<Derivation>(std::move(r.d));
    return t;
}

} // namespace beepl
