// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/frontend.hpp"
#include "internal.hpp"

namespace beepl {

namespace detail {

void note(Monitor& m, const std::string& event) {
    if (m.events.size() < 64) m.events.push_back(event);
}

uint64_t alloc_typed(State& s, const Ty& t) {
    const uint64_t b = s.theta.alloc(std::max<uint64_t>(size_of(t, s.pi), 1));
    s.sigma[b] = Ty::ref(t);
    return b;
}

void copy_struct(State& s, uint64_t src, int64_t src_off, uint64_t dst, int64_t dst_off, const std::string& id) {
    const Block* from = s.theta.block(src);
    Block* to = s.theta.block(dst);
    if (!from || !to) return;
    for (const auto& f : struct_layout(id, s.pi)) {
        const int64_t so = src_off + static_cast<int64_t>(f.offset);
        const int64_t d = dst_off + static_cast<int64_t>(f.offset);
        if (f.ty.is(Ty::Kind::Array)) {
            const uint64_t n = size_of(f.ty, s.pi);
            if (to->raw.size() < to->size) to->raw.resize(to->size, 0);
            for (uint64_t i = 0; i < n; ++i)
                if (auto byte = s.theta.byte(src, so + static_cast<int64_t>(i)))
                    to->raw[static_cast<std::size_t>(d) + i] = *byte;
        } else if (auto it = from->cells.find(so); it != from->cells.end()) {
            to->cells[d] = it->second;
        }
    }
}

uint64_t clone_struct(State& s, uint64_t b, int64_t off, const std::string& id) {
    const uint64_t nb = alloc_typed(s, Ty::struct_(id));
    copy_struct(s, b, off, nb, 0, id);
    return nb;
}

void write_value(State& s, uint64_t b, int64_t off, const Ty& t, const Expr& v) {
    if (t.is(Ty::Kind::Struct)) {
        if (v.kind == ExprKind::StructVal) copy_struct(s, v.block, v.ival, b, off, t.struct_id());
        return;
    }
    if (auto val = expr_to_value(v)) s.theta.store(b, off, *val);
}

ExprPtr zero_value(State& s, const Ty& t) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return t.is_bool() ? mk::bool_lit(false) : mk::int_lit(0, t.prim());
    case Ty::Kind::Option: return mk::none(t);
    case Ty::Kind::Unit: return mk::unit();
    case Ty::Kind::Bytes: return mk::bytes_val(s.theta.alloc_raw({}), 0, 0);
    case Ty::Kind::Ref: {
        const uint64_t b = alloc_typed(s, t.inner());
        write_value(s, b, 0, t.inner(), *zero_value(s, t.inner()));
        return mk::loc(b, 0);
    }
    case Ty::Kind::Struct: {
        const uint64_t b = alloc_typed(s, t);
        for (const auto& f : struct_layout(t.struct_id(), s.pi))
            if (f.ty.is_prim()) write_value(s, b, static_cast<int64_t>(f.offset), f.ty, *zero_value(s, f.ty));
        return mk::struct_val(b, 0, t.struct_id());
    }
    default: return mk::unit();
    }
}

} // namespace detail

using namespace detail;

std::optional<Ty> value_type(const State& s, const Expr& v) {
    switch (v.kind) {
    case ExprKind::ConstInt:
    case ExprKind::ConstLong: return Ty::prim(v.lit_ty);
    case ExprKind::ConstBool: return Ty::boolean();
    case ExprKind::UnitLit: return Ty::unit();
    case ExprKind::Loc: {
        auto it = s.sigma.find(v.block);
        if (it == s.sigma.end()) return std::nullopt;
        return it->second;
    }
    case ExprKind::SomeLit: {
        if (v.kids[0]->kind != ExprKind::Loc) return std::nullopt;
        auto it = s.sigma.find(v.kids[0]->block);
        if (it == s.sigma.end()) return std::nullopt;
        return Ty::option(it->second);
    }
    case ExprKind::NoneLit: return v.ty;
    case ExprKind::BytesVal: return Ty::bytes();
    case ExprKind::StructVal: return Ty::struct_(v.name);
    default: return std::nullopt;
    }
}

State empty_state(const TypingContext& ctx) {
    State s;
    s.funs = std::make_shared<std::map<std::string, FunDecl>>();
    s.pi = ctx.pi;
    s.psi = ctx.psi;
    s.constants = ctx.constants;
    return s;
}

State initial_state(const TypedProgram& tp, const ExternalWorld& w) {
    State s = empty_state(tp.ctx);
    auto funs = std::make_shared<std::map<std::string, FunDecl>>();
    for (const auto& [name, tf] : tp.funs) funs->emplace(name, tf.decl);
    s.funs = funs;
    uint32_t map_index = 0;
    for (const auto& d : tp.program.decls) {
        const auto* g = std::get_if<GlobDecl>(&d);
        if (!g) continue;
        if (g->is_map) {
            const Ty obj_ty = Ty::struct_("bpf_map");
            const uint64_t obj = alloc_typed(s, obj_ty);
            s.theta.store(obj, 0, Value::integer(PrimTy::int_(32, Sign::Unsigned), map_index++));
            s.map_names[obj] = g->name;
            const uint64_t var = alloc_typed(s, g->ty);
            s.theta.store(var, 0, Value::loc(obj, 0));
            s.globals[g->name] = {var, g->ty};
        } else if (g->ty.is(Ty::Kind::Array)) {
            const uint64_t b = alloc_typed(s, g->ty);
            Block* blk = s.theta.block(b);
            blk->raw.assign(blk->size, 0);
            if (const auto* str = std::get_if<std::string>(&g->init))
                for (std::size_t i = 0; i < str->size() && i < blk->raw.size(); ++i)
                    blk->raw[i] = static_cast<uint8_t>((*str)[i]);
            s.globals[g->name] = {b, g->ty};
        } else {
            const uint64_t b = alloc_typed(s, g->ty);
            int64_t init = 0;
            if (const auto* i = std::get_if<int64_t>(&g->init)) init = *i;
            if (const auto* bl = std::get_if<bool>(&g->init)) init = *bl ? 1 : 0;
            s.theta.store(b, 0, Value::integer(g->ty.prim(), init));
            s.globals[g->name] = {b, g->ty};
        }
    }
    (void)w;
    return s;
}

ExprPtr entry_call(State& s, const ExternalWorld& w, const FunDecl& fd) {
    std::vector<ExprPtr> args;
    auto packet = [&]() {
        if (!s.packet_block) s.packet_block = s.theta.alloc_raw(w.packet, Perm::ReadOnly);
        return s.packet_block;
    };
    for (const auto& [x, t] : fd.args) {
        (void)x;
        const bool ctx_ptr = t.is(Ty::Kind::Option) && t.inner().is(Ty::Kind::Ref) &&
                             t.inner().inner().is(Ty::Kind::Struct) &&
                             (t.inner().inner().struct_id() == "xdp_md" || t.inner().inner().struct_id() == "__sk_buff");
        if (ctx_ptr) {
            const Ty st = t.inner().inner();
            const uint64_t pb = packet();
            const uint64_t cb = alloc_typed(s, st);
            s.theta.store(cb, 0, Value::bytes(pb, 0, w.packet.size()));
            args.push_back(mk::some(mk::loc(cb, 0)));
        } else if (t.is(Ty::Kind::Bytes)) {
            args.push_back(mk::bytes_val(packet(), 0, w.packet.size()));
        } else {
            args.push_back(zero_value(s, t));
        }
    }
    return mk::call(fd.name, std::move(args));
}

std::optional<std::string> choose_entry(const TypedProgram& tp, const std::optional<std::string>& requested) {
    if (requested) {
        if (tp.funs.count(*requested)) return requested;
        return std::nullopt;
    }
    if (tp.funs.count("main")) return std::string("main");
    std::optional<std::string> flagged;
    int n_flagged = 0;
    for (const auto& n : tp.fun_order) {
        if (tp.funs.at(n).decl.flag) {
            flagged = n;
            ++n_flagged;
        }
    }
    if (n_flagged == 1) return flagged;
    if (tp.fun_order.size() == 1) return tp.fun_order.front();
    return std::nullopt;
}

EvalResult eval_multi(State& s, ExternalWorld& w, const ExprPtr& e, uint64_t fuel, const StepObserver& observer) {
    EvalResult r;
    ExprPtr cur = e;
    for (;;) {
        if (is_value(*cur)) {
            r.expr = cur;
            r.value = expr_to_value(*cur).value_or(Value::undef());
            if (r.value.is_undef()) {
                r.status = EvalResult::Status::Stuck;
                r.reason = "evaluation produced undef";
            }
            return r;
        }
        if (r.steps >= fuel) {
            r.status = EvalResult::Status::FuelExhausted;
            r.expr = cur;
            r.reason = "fuel of " + std::to_string(fuel) + " steps exhausted";
            return r;
        }
        StepOutcome o = step(s, w, cur);
        if (o.kind == StepOutcome::Kind::Stuck) {
            r.status = EvalResult::Status::Stuck;
            r.expr = cur;
            r.reason = o.reason;
            return r;
        }
        if (o.kind == StepOutcome::Kind::IsValue) continue;
        ++r.steps;
        cur = o.expr;
        if (observer) observer(o, s);
    }
}

RunResult run_program(const TypedProgram& tp, const std::string& entry, ExternalWorld& w, uint64_t fuel,
                      const StepObserver& observer) {
    RunResult rr{{}, initial_state(tp, w)};
    const FunDecl* fd = tp.fun(entry);
    if (!fd) throw CompileError("UnknownEntry", "no function named '" + entry + "'");
    ExprPtr call = entry_call(rr.state, w, *fd);
    rr.eval = eval_multi(rr.state, w, call, fuel, observer);
    return rr;
}

std::optional<ExtractResult> extract(State& s, const Value& bytes, const Ty& target) {
    const uint64_t need = size_of(target, s.pi);
    if (bytes.len < need) return std::nullopt;
    auto read = [&](int64_t off, uint64_t n) -> std::optional<uint64_t> {
        uint64_t raw = 0;
        for (uint64_t i = 0; i < n; ++i) {
            auto b = s.theta.byte(bytes.block, bytes.offset + off + static_cast<int64_t>(i));
            if (!b) return std::nullopt;
            raw |= static_cast<uint64_t>(*b) << (8 * i);
        }
        return raw;
    };
    auto prim_value = [&](const PrimTy& p, uint64_t raw) -> ExprPtr {
        if (p.is_bool()) return mk::bool_lit(raw != 0);
        return mk::int_lit(normalize(p, raw), p);
    };
    ExtractResult out;
    if (target.is_prim()) {
        auto raw = read(0, need);
        if (!raw) {
            ++s.monitor.out_of_bounds;
            note(s.monitor, "extract outside the packet image");
            return std::nullopt;
        }
        out.value = prim_value(target.prim(), *raw);
        return out;
    }
    const std::string& id = target.struct_id();
    const uint64_t b = alloc_typed(s, target);
    Block* blk = s.theta.block(b);
    blk->raw.assign(blk->size, 0);
    for (const auto& f : struct_layout(id, s.pi)) {
        const auto off = static_cast<int64_t>(f.offset);
        const uint64_t n = size_of(f.ty, s.pi);
        auto raw = read(off, f.ty.is_prim() ? n : 0);
        if (!raw) {
            ++s.monitor.out_of_bounds;
            note(s.monitor, "extract outside the packet image");
            return std::nullopt;
        }
        if (f.ty.is_prim()) {
            ExprPtr v = prim_value(f.ty.prim(), *raw);
            s.theta.store(b, off, *expr_to_value(*v));
            out.fields[f.name] = v;
        } else {
            for (uint64_t i = 0; i < n; ++i)
                if (auto byte = s.theta.byte(bytes.block, bytes.offset + off + static_cast<int64_t>(i)))
                    s.theta.block(b)->raw[static_cast<std::size_t>(off) + i] = *byte;
        }
    }
    out.value = mk::struct_val(b, 0, id);
    return out;
}

TypingContext typing_context_for(const State& s, const TypingContext& base) {
    TypingContext ctx = base;
    for (const auto& [x, bnd] : s.omega) ctx.gamma[x] = bnd.ty;
    ctx.sigma = s.sigma;
    return ctx;
}

std::string trace_line(const StepOutcome& o, const State& s) {
    std::string redex = o.expr ? debug_print(*o.expr) : "";
    if (redex.size() > 96) redex = redex.substr(0, 93) + "...";
    return o.rule + " | " + redex + " | blocks=" + std::to_string(s.theta.blocks().size());
}

} // namespace beepl
