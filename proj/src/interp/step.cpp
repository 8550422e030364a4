// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "internal.hpp"

namespace beepl {

using namespace detail;

namespace {

StepOutcome stepped(ExprPtr e, std::string rule) {
    return {StepOutcome::Kind::Stepped, std::move(e), std::move(rule), {}};
}

StepOutcome stuck(std::string reason) { return {StepOutcome::Kind::Stuck, nullptr, {}, std::move(reason)}; }

class Stepper {
  public:
    Stepper(State& s, ExternalWorld& w) : s_(s), w_(w) {}

    StepOutcome run(const ExprPtr& ep) {
        const Expr& e = *ep;
        if (is_value(e)) return {StepOutcome::Kind::IsValue, ep, {}, {}};
        switch (e.kind) {
        case ExprKind::Var: return var(e);
        case ExprKind::App: return app(e);
        case ExprKind::Prim: return prim(e);
        case ExprKind::Let: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "LET");
            if (e.name == "_") return stepped(e.kids[1], "LETV");
            return stepped(subst(e.kids[1], e.name, e.kids[0]), "LETV");
        }
        case ExprKind::Cond: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "COND");
            if (e.kids[0]->kind != ExprKind::ConstBool) return stuck("condition is not a boolean");
            return e.kids[0]->bval ? stepped(e.kids[1], "CONDT") : stepped(e.kids[2], "CONDF");
        }
        case ExprKind::StructInit: return struct_init(e);
        case ExprKind::Field: return field(e);
        case ExprKind::SomeLit:
            if (!is_value(*e.kids[0])) return congruence(e, 0, "SOME");
            return stuck("some(...) of a non-location value");
        case ExprKind::Match: return match(e);
        case ExprKind::For: return for_loop(e);
        case ExprKind::Repeat: return repeat(e);
        default: return stuck("no rule for expression");
        }
    }

  private:
    State& s_;
    ExternalWorld& w_;

    StepOutcome congruence(const Expr& parent, std::size_t i, const std::string& rule) {
        StepOutcome o = run(parent.kids[i]);
        if (o.kind != StepOutcome::Kind::Stepped) {
            if (o.kind == StepOutcome::Kind::IsValue) return stuck("congruence on a value");
            return o;
        }
        o.expr = with_kid(parent, i, o.expr);
        if (o.rule.empty()) o.rule = rule;
        return o;
    }

    StepOutcome read_binding(const Binding& b, const std::string& rule, const std::string& x) {
        if (b.ty.is(Ty::Kind::Struct)) return stepped(mk::struct_val(b.block, 0, b.ty.struct_id()), rule);
        if (b.ty.is(Ty::Kind::Array)) return stuck("array '" + x + "' read as a value");
        auto v = s_.theta.load(b.block, 0);
        if (!v) {
            ++s_.monitor.uninit_reads;
            note(s_.monitor, "uninitialised read of '" + x + "'");
            return stuck("uninitialised variable '" + x + "'");
        }
        return stepped(value_to_expr(*v), rule);
    }

    StepOutcome var(const Expr& e) {
        if (auto it = s_.omega.find(e.name); it != s_.omega.end()) return read_binding(it->second, "LVAR", e.name);
        if (auto it = s_.globals.find(e.name); it != s_.globals.end())
            return read_binding(it->second, "GVAR", e.name);
        if (auto it = s_.constants.find(e.name); it != s_.constants.end())
            return stepped(mk::int_lit(it->second.value, it->second.ty), "GVAR");
        return stuck("unbound variable '" + e.name + "'");
    }

    StepOutcome null_access(const std::string& what) {
        ++s_.monitor.null_derefs;
        note(s_.monitor, what + " through none");
        return stuck(what + " through a null option");
    }

    StepOutcome prim(const Expr& e) {
        switch (e.op) {
        case PrimOpKind::Deref: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "DREF");
            const Expr& p = *e.kids[0];
            if (p.kind == ExprKind::NoneLit || p.kind == ExprKind::SomeLit) return null_access("dereference");
            if (p.kind != ExprKind::Loc) return stuck("dereference of a non-location");
            auto sig = s_.sigma.find(p.block);
            if (sig == s_.sigma.end()) return stuck("dereference of an untyped location");
            const Ty content = sig->second.inner();
            if (!s_.theta.valid_access(p.block, p.ival, size_of(content, s_.pi), Perm::ReadOnly)) {
                ++s_.monitor.out_of_bounds;
                note(s_.monitor, "invalid read of block " + std::to_string(p.block));
                return stuck("invalid memory read");
            }
            if (content.is(Ty::Kind::Struct)) {
                const uint64_t b = clone_struct(s_, p.block, p.ival, content.struct_id());
                return stepped(mk::struct_val(b, 0, content.struct_id()), "DREFV");
            }
            auto v = s_.theta.load(p.block, p.ival);
            if (!v) {
                ++s_.monitor.uninit_reads;
                note(s_.monitor, "uninitialised read of block " + std::to_string(p.block));
                return stuck("uninitialised memory read");
            }
            return stepped(value_to_expr(*v), "DREFV");
        }
        case PrimOpKind::Ref: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "REF");
            auto t = value_type(s_, *e.kids[0]);
            if (!t || !(t->is_prim() || t->is(Ty::Kind::Struct))) return stuck("ref of a non-basic value");
            const uint64_t b = alloc_typed(s_, *t);
            write_value(s_, b, 0, *t, *e.kids[0]);
            return stepped(mk::loc(b, 0), "REFV");
        }
        case PrimOpKind::Assign: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "MASSGN1");
            if (!is_value(*e.kids[1])) return congruence(e, 1, "MASSGN2");
            const Expr& p = *e.kids[0];
            if (p.kind == ExprKind::NoneLit || p.kind == ExprKind::SomeLit) return null_access("assignment");
            if (p.kind != ExprKind::Loc) return stuck("assignment to a non-location");
            auto sig = s_.sigma.find(p.block);
            if (sig == s_.sigma.end()) return stuck("assignment to an untyped location");
            const Ty content = sig->second.inner();
            if (!s_.theta.valid_access(p.block, p.ival, size_of(content, s_.pi), Perm::Freeable)) {
                ++s_.monitor.out_of_bounds;
                note(s_.monitor, "invalid write to block " + std::to_string(p.block));
                return stuck("invalid memory write");
            }
            write_value(s_, p.block, p.ival, content, *e.kids[1]);
            return stepped(mk::unit(), "MASSGNV");
        }
        case PrimOpKind::Uop: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "UOP");
            auto v = expr_to_value(*e.kids[0]);
            Value r = v ? uop_sem(e.uop, *v) : Value::undef();
            if (r.is_undef()) undef("unary operator on " + (v ? to_string(*v) : std::string("?")));
            return stepped(value_to_expr(r), "UOPV");
        }
        case PrimOpKind::Bop: {
            if (!is_value(*e.kids[0])) return congruence(e, 0, "BOP1");
            if (!is_value(*e.kids[1])) return congruence(e, 1, "BOP2");
            auto a = expr_to_value(*e.kids[0]);
            auto b = expr_to_value(*e.kids[1]);
            if (!a || !b) return stuck("operator applied to a non-value");
            if (s_.guard_unsafe && unsafe(e.bop, *a, *b)) return stepped(mk::int_lit(0, a->prim), "BOPV");
            Value r = bop_sem(e.bop, *a, *b);
            if (r.is_undef()) undef(to_string(*a) + " " + to_string(e.bop) + " " + to_string(*b));
            return stepped(value_to_expr(r), "BOPV");
        }
        }
        return stuck("unknown primitive");
    }

    void undef(const std::string& what) {
        ++s_.monitor.undef_values;
        note(s_.monitor, "undef from " + what);
    }

    StepOutcome struct_init(const Expr& e) {
        for (std::size_t i = 0; i < e.kids.size(); ++i)
            if (!is_value(*e.kids[i])) return congruence(e, i, "STRUCT");
        const Ty t = Ty::struct_(e.name);
        const uint64_t b = alloc_typed(s_, t);
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            auto f = field_layout(e.name, e.field_names[i], s_.pi);
            if (!f) return stuck("unknown field '" + e.field_names[i] + "'");
            write_value(s_, b, static_cast<int64_t>(f->offset), f->ty, *e.kids[i]);
        }
        return stepped(mk::struct_val(b, 0, e.name), "STRUCTV");
    }

    StepOutcome field(const Expr& e) {
        if (!is_value(*e.kids[0])) return congruence(e, 0, "FACCESS");
        const Expr& t = *e.kids[0];
        uint64_t b = 0;
        int64_t off = 0;
        std::string id;
        if (t.kind == ExprKind::StructVal) {
            b = t.block;
            off = t.ival;
            id = t.name;
        } else if (t.kind == ExprKind::Loc) {
            auto sig = s_.sigma.find(t.block);
            if (sig == s_.sigma.end() || !sig->second.inner().is(Ty::Kind::Struct))
                return stuck("field access on a non-struct location");
            b = t.block;
            off = t.ival;
            id = sig->second.inner().struct_id();
        } else if (t.kind == ExprKind::NoneLit || t.kind == ExprKind::SomeLit) {
            return null_access("field access");
        } else {
            return stuck("field access on a non-struct value");
        }
        auto f = field_layout(id, e.name, s_.pi);
        if (!f) return stuck("struct " + id + " has no field '" + e.name + "'");
        auto v = s_.theta.load(b, off + static_cast<int64_t>(f->offset));
        if (!v) {
            ++s_.monitor.uninit_reads;
            note(s_.monitor, "uninitialised field " + id + "." + e.name);
            return stuck("uninitialised field read");
        }
        return stepped(value_to_expr(*v), "FACCESSV");
    }

    StepOutcome match(const Expr& e) {
        if (!is_value(*e.kids[0])) return congruence(e, 0, "MATCH1");
        const Expr& m = *e.kids[0];
        if (m.kind == ExprKind::NoneLit) {
            for (const auto& a : e.arms)
                if (a.pat.kind == Pattern::Kind::None || a.pat.kind == Pattern::Kind::Wild)
                    return stepped(a.body, "MNONE");
            return stuck("no arm matches none");
        }
        if (m.kind == ExprKind::SomeLit) {
            for (const auto& a : e.arms) {
                if (a.pat.kind == Pattern::Kind::Some) return stepped(subst(a.body, a.pat.binder, m.kids[0]), "MSOME");
                if (a.pat.kind == Pattern::Kind::Wild) return stepped(a.body, "MSOME");
            }
            return stuck("no arm matches some");
        }
        if (m.kind == ExprKind::BytesVal) {
            const Value region = *expr_to_value(m);
            for (const auto& a : e.arms) {
                if (a.pat.kind == Pattern::Kind::Wild) return stepped(a.body, "MBYTESF");
                if (a.pat.kind != Pattern::Kind::Bytes) continue;
                auto ex = extract(s_, region, a.pat.target);
                if (!ex) continue;
                ExprPtr body = subst(a.body, a.pat.binder, ex->value);
                for (const auto& f : a.pat.fields) {
                    auto it = ex->fields.find(f.name);
                    if (it == ex->fields.end()) return stuck("extraction lacks field '" + f.name + "'");
                    body = subst(body, f.name, it->second);
                }
                return stepped(body, "MBYTES");
            }
            return stuck("no arm matches the bytes region");
        }
        return stuck("match on a non-matchable value");
    }

    StepOutcome for_loop(const Expr& e) {
        if (!is_value(*e.kids[0])) return congruence(e, 0, "FOR1");
        if (!is_value(*e.kids[1])) return congruence(e, 1, "FOR2");
        auto lo = expr_to_value(*e.kids[0]);
        auto hi = expr_to_value(*e.kids[1]);
        if (!lo || !hi) return stuck("loop bounds are not integers");
        const uint64_t n = range(*lo, *hi, e.dir);
        if (n == 0 || is_value(*e.kids[2])) return stepped(mk::unit(), "FORV");
        return stepped(mk::repeat(static_cast<int64_t>(n - 1), e.kids[2], e.kids[2]), "FORV");
    }

    StepOutcome repeat(const Expr& e) {
        const ExprPtr& cur = e.kids[1];
        if (is_value(*cur)) {
            if (e.ival <= 0) return stepped(mk::unit(), "EMPTY");
            return stepped(mk::repeat(e.ival - 1, e.kids[0], e.kids[0]), "SEQT");
        }
        StepOutcome o = run(cur);
        if (o.kind != StepOutcome::Kind::Stepped) return o.kind == StepOutcome::Kind::Stuck ? o : stuck("repeat");
        if (is_value(*o.expr)) {
            o.expr = e.ival <= 0 ? mk::unit() : mk::repeat(e.ival - 1, e.kids[0], e.kids[0]);
        } else {
            o.expr = mk::repeat(e.ival, e.kids[0], o.expr);
        }
        if (o.rule.empty()) o.rule = "SEQH";
        return o;
    }

    StepOutcome app(const Expr& e) {
        for (std::size_t i = 1; i < e.kids.size(); ++i)
            if (!is_value(*e.kids[i])) return congruence(e, i, "APP2");
        const Expr& callee = *e.kids[0];
        if (callee.kind != ExprKind::Var) return stuck("callee is not a name");
        if (auto it = s_.funs->find(callee.name); it != s_.funs->end()) return call(it->second, e);
        if (s_.psi.count(callee.name)) return external(callee.name, e);
        return stuck("unknown function '" + callee.name + "'");
    }

    StepOutcome call(const FunDecl& fd, const Expr& e) {
        if (e.kids.size() - 1 != fd.args.size()) return stuck("arity mismatch calling '" + fd.name + "'");
        ExprPtr body = fd.body;
        auto bind = [&](const std::string& x, const Ty& t, const Expr& v) {
            const std::string fresh = x + "#" + std::to_string(++s_.fresh);
            const uint64_t b = alloc_typed(s_, t);
            write_value(s_, b, 0, t, v);
            s_.omega[fresh] = {b, t};
            body = subst(body, x, mk::var(fresh));
        };
        for (std::size_t i = 0; i < fd.args.size(); ++i) bind(fd.args[i].first, fd.args[i].second, *e.kids[i + 1]);
        for (const auto& [y, t] : fd.vars) bind(y, t, *zero_value(s_, t));
        return stepped(body, "APP3");
    }

    StepOutcome external(const std::string& name, const Expr& e) {
        w_.io_log.push_back(name);
        if (name == "bpf_get_current_uid_gid") return stepped(mk::long_lit(static_cast<int64_t>(w_.uid_gid)), "EAPP");
        if (name == "htons") {
            const auto v = static_cast<uint16_t>(e.kids[1]->ival);
            const auto r = static_cast<uint16_t>((v >> 8) | (v << 8));
            return stepped(mk::int_lit(r, PrimTy::int_(16, Sign::Unsigned)), "EAPP");
        }
        if (name == "bpf_map_lookup_elem") {
            const Ty result = s_.psi.at(name).ret;
            const Expr& m = *e.kids[1];
            const Expr& k = *e.kids[2];
            if (m.kind != ExprKind::SomeLit || k.kind != ExprKind::SomeLit) return stepped(mk::none(result), "EAPP");
            auto mn = s_.map_names.find(m.kids[0]->block);
            auto key = s_.theta.load(k.kids[0]->block, k.kids[0]->ival);
            if (!key) {
                ++s_.monitor.uninit_reads;
                note(s_.monitor, "uninitialised map key");
                return stuck("uninitialised map key");
            }
            if (mn == s_.map_names.end()) return stepped(mk::none(result), "EAPP");
            const auto ukey = static_cast<uint64_t>(key->i);
            auto wm = w_.maps.find(mn->second);
            if (wm == w_.maps.end() || !wm->second.count(ukey)) return stepped(mk::none(result), "EAPP");
            auto& cached = s_.lookup_cache[{mn->second, ukey}];
            if (!cached) {
                cached = alloc_typed(s_, Ty::int64());
                s_.theta.store(cached, 0, Value::integer(PrimTy::int64(), wm->second.at(ukey)));
            }
            return stepped(mk::some(mk::loc(cached, 0)), "EAPP");
        }
        return stuck("external '" + name + "' has no model");
    }
};

} // namespace

StepOutcome step(State& s, ExternalWorld& w, const ExprPtr& e) { return Stepper(s, w).run(e); }

} // namespace beepl
