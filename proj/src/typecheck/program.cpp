// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "beepl/typecheck.hpp"

namespace beepl {

void validate_type(const Ty& t, const CompositeEnv& pi, Span sp) {
    switch (t.kind()) {
    case Ty::Kind::Prim:
    case Ty::Kind::Bytes:
    case Ty::Kind::Unit: return;
    case Ty::Kind::Ref:
        if (!t.inner().is_basic())
            throw CompileError("InvalidType", "pointer target must be a basic type: " + to_string(t), sp);
        validate_type(t.inner(), pi, sp);
        return;
    case Ty::Kind::Option:
        if (!t.inner().is_pointer())
            throw CompileError("InvalidType", "option payload must be a pointer: " + to_string(t), sp);
        validate_type(t.inner(), pi, sp);
        return;
    case Ty::Kind::Struct:
        if (!pi.count(t.struct_id())) throw CompileError("UnknownStruct", "unknown struct '" + t.struct_id() + "'", sp);
        return;
    case Ty::Kind::Array:
        if (t.len() == 0) throw CompileError("InvalidType", "array length must be positive", sp);
        return;
    case Ty::Kind::Fun:
    case Ty::Kind::FunPtr:
        for (const auto& a : t.args()) validate_type(a, pi, sp);
        validate_type(t.ret(), pi, sp);
        return;
    }
}

const FunDecl* TypedProgram::fun(const std::string& name) const {
    auto it = funs.find(name);
    return it == funs.end() ? nullptr : &it->second.decl;
}

std::optional<std::string> TypedProgram::entry_point() const {
    for (const auto& n : fun_order)
        if (funs.at(n).decl.flag) return n;
    return std::nullopt;
}

TypedFunDecl check_fun_decl(const TypingContext& ctx, const FunDecl& fd, bool with_derivation) {
    const Span sp = fd.span;
    std::set<std::string> names;
    TypingContext local = ctx;
    auto bind = [&](const std::string& x, const Ty& t) {
        if (!names.insert(x).second) throw CompileError("DuplicateName", "parameter '" + x + "' declared twice", sp);
        if (ctx.globals.count(x) || ctx.funs.count(x) || ctx.later_funs.count(x) || ctx.psi.count(x) ||
            ctx.constants.count(x) || x == fd.name)
            throw CompileError("DuplicateName", "parameter '" + x + "' collides with a global declaration", sp);
        validate_type(t, ctx.pi, sp);
        if (t.is(Ty::Kind::Array)) throw CompileError("TypeMismatch", "parameter '" + x + "' has array type", sp);
        local.gamma[x] = t;
    };
    for (const auto& [x, t] : fd.args) {
        bind(x, t);
        if (!section_ok(t, fd.sec))
            throw CompileError("SectionMismatch",
                               "parameter '" + x + "' of type " + to_string(t) + " is not valid in section \"" +
                                   fd.sec.value_or("") + "\"",
                               sp, "TFDECL");
    }
    for (const auto& [x, t] : fd.vars) {
        bind(x, t);
        if (!t.is_prim()) throw CompileError("TypeMismatch", "local '" + x + "' must have a primitive type", sp);
    }
    validate_type(fd.rt, ctx.pi, sp);
    if (fd.rt.is_pointer() || fd.rt.is(Ty::Kind::Option) || fd.rt.is(Ty::Kind::Struct) ||
        fd.rt.is(Ty::Kind::Array))
        throw CompileError("ReturnsPointer", "function '" + fd.name + "' cannot return " + to_string(fd.rt), sp,
                           "TFDECL");

    Typing body = elaborate_expr(local, fd.body, fd.rt, with_derivation);
    if (body.ty != fd.rt)
        throw CompileError("TypeMismatch",
                           "body of '" + fd.name + "' has type " + to_string(body.ty) + ", declared " +
                               to_string(fd.rt),
                           fd.body->span, "TFDECL");
    if (fd.ef && !effect_subset(body.eff, *fd.ef))
        throw CompileError("EffectAnnotationTooSmall",
                           "'" + fd.name + "' has effect " + to_string(body.eff) + ", annotated " + to_string(*fd.ef),
                           sp, "TFDECL");

    TypedFunDecl out;
    out.decl = fd;
    out.decl.body = body.elaborated;
    out.decl.flag = fd.sec.has_value();
    out.inferred = body.eff;
    out.effect = fd.ef ? *fd.ef : body.eff;
    if (body.derivation) {
        out.derivation = std::make_shared<Derivation>();
        out.derivation->rule = "TFDECL";
        out.derivation->ty = fd.rt;
        out.derivation->eff = out.effect;
        out.derivation->expr = body.elaborated;
        out.derivation->premises.push_back(std::move(*body.derivation));
    }
    return out;
}

namespace {

void check_global(GlobDecl& g, const CompositeEnv& pi) {
    if (g.is_map) {
        g.ty = Ty::ref(Ty::struct_("bpf_map"));
        return;
    }
    validate_type(g.ty, pi, g.span);
    const bool arr = g.ty.is(Ty::Kind::Array);
    if (!g.ty.is_prim() && !arr)
        throw CompileError("TypeMismatch", "global '" + g.name + "' must be primitive or an array", g.span);
    if (const auto* i = std::get_if<int64_t>(&g.init)) {
        if (!g.ty.is_integer()) throw CompileError("TypeMismatch", "integer initialiser for " + to_string(g.ty), g.span);
        const PrimTy p = g.ty.prim();
        const bool fits = *i < 0 ? (p.is_signed() && *i >= p.min_value()) : static_cast<uint64_t>(*i) <= p.max_value();
        if (!fits) throw CompileError("LiteralOutOfRange", "initialiser does not fit in " + to_string(g.ty), g.span);
    } else if (std::holds_alternative<bool>(g.init)) {
        if (!g.ty.is_bool()) throw CompileError("TypeMismatch", "bool initialiser for " + to_string(g.ty), g.span);
    } else if (const auto* s = std::get_if<std::string>(&g.init)) {
        if (!arr || g.ty.elem().bits != 8 || s->size() + 1 > g.ty.len())
            throw CompileError("TypeMismatch", "string initialiser for " + to_string(g.ty), g.span);
    }
}

} // namespace

TypedProgram check_program(const Program& p, const HelperRegistry& reg, bool with_derivation) {
    TypedProgram tp;
    TypingContext& ctx = tp.ctx;
    ctx = context_from_registry(reg);
    for (const auto& c : p.composites) {
        if (ctx.pi.count(c.id)) throw CompileError("DuplicateName", "struct '" + c.id + "' already defined");
        std::set<std::string> fields;
        for (const auto& f : c.fields) {
            if (!fields.insert(f.name).second)
                throw CompileError("DuplicateName", "field '" + f.name + "' repeated in struct " + c.id);
            if (!(f.ty.is_prim() || f.ty.is(Ty::Kind::Array)))
                throw CompileError("InvalidType", "field '" + f.name + "' of struct " + c.id + " must be scalar");
            validate_type(f.ty, ctx.pi);
        }
        if (c.fields.empty()) throw CompileError("InvalidType", "struct " + c.id + " has no fields");
        ctx.pi[c.id] = c;
    }

    std::set<std::string> names;
    tp.program.composites = p.composites;
    for (const auto& d : p.decls) {
        const std::string& n = decl_name(d);
        if (!names.insert(n).second) throw CompileError("DuplicateName", "'" + n + "' declared twice");
        if (ctx.constants.count(n)) throw CompileError("DuplicateName", "'" + n + "' shadows a builtin constant");
        if (std::holds_alternative<FunDecl>(d)) {
            if (reg.entries.count(n)) throw CompileError("DuplicateName", "'" + n + "' shadows a builtin helper");
            ctx.later_funs.insert(n);
        }
    }
    for (const auto& d : p.decls) {
        if (const auto* x = std::get_if<ExtDecl>(&d)) {
            for (const auto& a : x->args) validate_type(a, ctx.pi, x->span);
            validate_type(x->ret, ctx.pi, x->span);
            if (x->ret.is_pointer())
                throw CompileError("ReturnsPointer", "extern '" + x->name + "' must return an option, not a pointer",
                                   x->span);
            ctx.psi[x->name] = ExtSig{x->name, x->args, x->ef, x->ret};
        } else if (const auto* g = std::get_if<GlobDecl>(&d)) {
            GlobDecl gg = *g;
            check_global(gg, ctx.pi);
            ctx.globals[gg.name] = gg.ty;
        }
    }

    for (const auto& d : p.decls) {
        if (const auto* f = std::get_if<FunDecl>(&d)) {
            ctx.later_funs.erase(f->name);
            TypedFunDecl tf = check_fun_decl(ctx, *f, with_derivation);
            std::vector<Ty> args;
            for (const auto& a : f->args) args.push_back(a.second);
            ctx.funs[f->name] = FunSig{args, tf.effect, f->rt};
            tp.program.decls.emplace_back(tf.decl);
            tp.fun_order.push_back(f->name);
            tp.funs.emplace(f->name, std::move(tf));
        } else if (const auto* g = std::get_if<GlobDecl>(&d)) {
            GlobDecl gg = *g;
            check_global(gg, ctx.pi);
            tp.program.decls.emplace_back(std::move(gg));
        } else {
            tp.program.decls.push_back(d);
        }
    }
    return tp;
}

} // namespace beepl
