// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>
#include <set>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

namespace beepl {

namespace {

const std::vector<PrimTy>& int_types() {
    static const std::vector<PrimTy> ts = {
        PrimTy::int_(8),  PrimTy::int_(8, Sign::Unsigned),  PrimTy::int_(16), PrimTy::int_(16, Sign::Unsigned),
        PrimTy::int_(32), PrimTy::int_(32, Sign::Unsigned), PrimTy::long_(),  PrimTy::long_(Sign::Unsigned),
    };
    return ts;
}

struct Var {
    std::string name;
    Ty ty;
};

class Gen {
  public:
    Gen(uint64_t seed, const GenConfig& cfg) : rng_(seed), cfg_(cfg) {}

    Program program() {
        Program p;
        if (cfg_.use_structs) {
            Composite c{"pt", {}};
            const int n = 2 + pick(3);
            for (int i = 0; i < n; ++i) c.fields.push_back({"f" + std::to_string(i), Ty::prim(any_prim())});
            comp_ = c;
            p.composites.push_back(c);
        }
        if (cfg_.use_maps && coin(0.5)) {
            GlobDecl m;
            m.name = "gmap";
            m.ty = Ty::ref(Ty::struct_("bpf_map"));
            m.is_map = true;
            m.sec = ".maps";
            p.decls.emplace_back(m);
            have_map_ = true;
        }
        if (coin(0.4)) {
            GlobDecl g;
            g.name = "g0";
            g.ty = Ty::prim(int_type());
            g.init = static_cast<int64_t>(normalize(g.ty.prim(), static_cast<uint64_t>(small(g.ty.prim()))));
            p.decls.emplace_back(g);
            globals_.push_back({g.name, g.ty});
        }
        const int helpers = cfg_.max_helpers > 0 ? pick(cfg_.max_helpers + 1) : 0;
        for (int i = 0; i < helpers; ++i) {
            FunDecl f;
            f.name = "h" + std::to_string(i);
            f.rt = Ty::prim(any_prim());
            const int nargs = pick(4);
            for (int k = 0; k < nargs; ++k) {
                const PrimTy q = any_prim();
                f.args.emplace_back("a" + std::to_string(k), coin(0.3) ? Ty::ref(Ty::prim(q)) : Ty::prim(q));
            }
            env_.clear();
            for (const auto& [x, t] : f.args) env_.push_back({x, t});
            f.body = gen(f.rt, std::max(2, cfg_.max_depth - 2));
            helpers_.push_back(f);
            p.decls.emplace_back(f);
        }
        FunDecl m;
        m.name = "main";
        m.rt = Ty::int32();
        env_.clear();
        m.body = gen(m.rt, cfg_.max_depth);
        p.decls.emplace_back(m);
        return p;
    }

  private:
    std::mt19937_64 rng_;
    GenConfig cfg_;
    std::vector<Var> env_;
    std::vector<Var> globals_;
    std::set<std::string> hidden_;
    std::vector<FunDecl> helpers_;
    std::optional<Composite> comp_;
    bool have_map_ = false;
    int loop_nesting_ = 0;
    int fresh_ = 0;

    int pick(int n) { return n <= 1 ? 0 : static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }
    bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
    int64_t range(int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(rng_); }

    PrimTy int_type() { return int_types()[static_cast<std::size_t>(pick(static_cast<int>(int_types().size())))]; }
    PrimTy any_prim() { return coin(0.15) ? PrimTy::boolean() : int_type(); }

    int64_t small(const PrimTy& p) { return p.is_signed() ? range(-4, 12) : range(0, 12); }

    ExprPtr lit(const PrimTy& p) {
        if (p.is_bool()) return mk::bool_lit(coin(0.5));
        const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
        int64_t v;
        if (r < 0.5) v = small(p);
        else if (r < 0.62) v = p.min_value();
        else if (r < 0.74) v = static_cast<int64_t>(p.max_value());
        else if (r < 0.84) v = -1;
        else v = static_cast<int64_t>(rng_());
        return mk::int_lit(v, p);
    }

    std::vector<const Var*> visible(const std::function<bool(const Ty&)>& want) const {
        std::vector<const Var*> out;
        std::set<std::string> seen;
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
            if (!seen.insert(it->name).second) continue;
            if (hidden_.count(it->name)) continue;
            if (want(it->ty)) out.push_back(&*it);
        }
        for (const auto& g : globals_)
            if (!seen.count(g.name) && want(g.ty)) out.push_back(&g);
        return out;
    }

    ExprPtr var_of(const Ty& t) {
        auto vs = visible([&](const Ty& u) { return u == t; });
        if (vs.empty()) return nullptr;
        return mk::var(vs[static_cast<std::size_t>(pick(static_cast<int>(vs.size())))]->name);
    }

    std::string binder() {
        if (coin(0.1)) {
            auto vs = visible([](const Ty&) { return true; });
            std::vector<std::string> locals;
            for (const auto* v : vs)
                if (v->name != "g0") locals.push_back(v->name);
            if (!locals.empty()) return locals[static_cast<std::size_t>(pick(static_cast<int>(locals.size())))];
        }
        return "v" + std::to_string(fresh_++);
    }

    Ty some_type(int d) {
        const int r = pick(10);
        if (r < 6 || d < 3) return Ty::prim(any_prim());
        if (r < 8) return Ty::ref(Ty::prim(int_type()));
        if (r < 9 && comp_) return Ty::struct_(comp_->id);
        return Ty::option(Ty::ref(Ty::prim(int_type())));
    }

    template <typename F>
    ExprPtr scoped(const std::string& x, const Ty& t, F&& f) {
        env_.push_back({x, t});
        ExprPtr r = f();
        env_.pop_back();
        return r;
    }

    // ------------------------------------------------------------ by type

    ExprPtr gen(const Ty& t, int d) {
        switch (t.kind()) {
        case Ty::Kind::Prim: return gen_prim(t.prim(), d);
        case Ty::Kind::Unit: return gen_unit(d);
        case Ty::Kind::Ref: {
            if (auto v = var_of(t); v && (d < 2 || coin(0.5))) return v;
            if (d < 2) return nullptr;
            if (auto inner = gen(t.inner(), d - 1)) return mk::ref(inner);
            return var_of(t);
        }
        case Ty::Kind::Struct: {
            if (auto v = var_of(t); v && (d < 2 || coin(0.4))) return v;
            if (d < 2) return nullptr;
            const auto rt = Ty::ref(t);
            if (coin(0.25) && d >= 3) {
                if (auto r = gen(rt, d - 1)) return mk::deref(r);
            }
            std::vector<std::string> names;
            std::vector<ExprPtr> vals;
            for (const auto& f : comp_->fields) {
                names.push_back(f.name);
                vals.push_back(gen(f.ty, d - 1));
            }
            return mk::struct_init(comp_->id, names, vals);
        }
        case Ty::Kind::Option: {
            if (auto v = var_of(t); v && coin(0.4)) return v;
            if (d >= 3 && coin(0.6)) {
                if (auto r = gen(t.inner(), d - 1)) return mk::some(r);
            }
            return mk::none(t);
        }
        default: return nullptr;
        }
    }

    ExprPtr gen_unit(int d) {
        if (d < 2) return mk::unit();
        for (int attempt = 0; attempt < 6; ++attempt) {
            ExprPtr e = unit_production(d);
            if (e && expr_depth(*e) <= static_cast<uint64_t>(d)) return e;
        }
        return mk::unit();
    }

    ExprPtr unit_production(int d) {
        {
            switch (pick(6)) {
            case 0:
            case 1: {
                auto refs = visible([](const Ty& u) { return u.is(Ty::Kind::Ref); });
                if (refs.empty()) break;
                const Var r = *refs[static_cast<std::size_t>(pick(static_cast<int>(refs.size())))];
                auto v = gen(r.ty.inner(), d - 1);
                if (!v) break;
                return mk::assign(mk::var(r.name), v);
            }
            case 2: {
                if (loop_nesting_ >= cfg_.max_loop_nesting || d < 3) break;
                return loop(d);
            }
            case 3: {
                const Ty q = some_type(d);
                auto b = gen(q, d - 1);
                if (!b) break;
                const std::string x = binder();
                return mk::let(x, q, b, scoped(x, q, [&] { return gen_unit(d - 1); }));
            }
            case 4: {
                auto g = gen_prim(PrimTy::boolean(), d - 1);
                return mk::cond(g, gen_unit(d - 1), gen_unit(d - 1));
            }
            default: break;
            }
        }
        return nullptr;
    }

    ExprPtr bound(const PrimTy& q, std::set<std::string>& used) {
        if (coin(0.35)) {
            auto vs = visible([&](const Ty& u) { return u == Ty::prim(q); });
            if (!vs.empty()) {
                const Var* v = vs[static_cast<std::size_t>(pick(static_cast<int>(vs.size())))];
                used.insert(v->name);
                return mk::bop(BinOp::And, mk::var(v->name), mk::int_lit(7, q));
            }
        }
        return mk::int_lit(q.is_signed() ? range(-3, 6) : range(0, 6), q);
    }

    ExprPtr loop(int d) {
        const PrimTy q = int_type();
        std::set<std::string> used;
        auto lo = bound(q, used);
        auto hi = bound(q, used);
        const Dir dir = coin(0.7) ? Dir::Up : Dir::Down;
        const auto saved = hidden_;
        hidden_.insert(used.begin(), used.end());
        ++loop_nesting_;
        auto body = gen_unit(d - 1);
        --loop_nesting_;
        hidden_ = saved;
        return mk::for_(lo, hi, dir, body);
    }

    // ------------------------------------------------------------ primitives

    ExprPtr division_rhs(const PrimTy& p, int d) {
        if (cfg_.bias_operands) {
            const int r = pick(10);
            if (r < 3) return mk::int_lit(0, p);
            if (r < 5) return mk::int_lit(-1, p);
            if (r < 6) return mk::int_lit(p.min_value(), p);
        }
        return gen_prim(p, d);
    }

    ExprPtr division_lhs(const PrimTy& p, int d) {
        if (cfg_.bias_operands && coin(0.25)) return mk::int_lit(p.min_value(), p);
        return gen_prim(p, d);
    }

    ExprPtr leaf(const PrimTy& p) {
        if (coin(0.5)) {
            if (auto v = var_of(Ty::prim(p))) return v;
        }
        return lit(p);
    }

    ExprPtr gen_prim(const PrimTy& p, int d) {
        if (d <= 1 || (d <= 3 && coin(0.12))) return leaf(p);
        for (int attempt = 0; attempt < 8; ++attempt) {
            auto e = p.is_bool() ? bool_production(d) : int_production(p, d);
            if (e && expr_depth(*e) <= static_cast<uint64_t>(d)) return e;
        }
        return leaf(p);
    }

    ExprPtr shared_production(const PrimTy& p, int d, int which) {
        const Ty t = Ty::prim(p);
        switch (which) {
        case 0: { // let
            const Ty q = some_type(d);
            auto b = gen(q, d - 1);
            if (!b) return nullptr;
            const std::string x = binder();
            return mk::let(x, q, b, scoped(x, q, [&] { return gen_prim(p, d - 1); }));
        }
        case 1: return mk::cond(gen_prim(PrimTy::boolean(), d - 1), gen_prim(p, d - 1), gen_prim(p, d - 1));
        case 2: { // deref
            auto r = gen(Ty::ref(t), d - 1);
            return r ? mk::deref(r) : nullptr;
        }
        case 3: { // field
            if (!comp_) return nullptr;
            std::vector<std::string> fs;
            for (const auto& f : comp_->fields)
                if (f.ty == t) fs.push_back(f.name);
            if (fs.empty()) return nullptr;
            const std::string f = fs[static_cast<std::size_t>(pick(static_cast<int>(fs.size())))];
            const Ty st = Ty::struct_(comp_->id);
            auto target = coin(0.3) ? gen(Ty::ref(st), d - 1) : gen(st, d - 1);
            return target ? mk::field(target, f) : nullptr;
        }
        case 4: { // call
            std::vector<const FunDecl*> fs;
            for (const auto& h : helpers_)
                if (h.rt == t) fs.push_back(&h);
            if (fs.empty()) return nullptr;
            const FunDecl* h = fs[static_cast<std::size_t>(pick(static_cast<int>(fs.size())))];
            std::vector<ExprPtr> args;
            for (const auto& [x, at] : h->args) {
                auto a = gen(at, d - 1);
                if (!a) return nullptr;
                args.push_back(a);
            }
            return mk::call(h->name, args);
        }
        case 5: { // option match
            const Ty rq = Ty::ref(Ty::prim(int_type()));
            auto s = gen(Ty::option(rq), d - 1);
            if (!s) return nullptr;
            const std::string y = binder();
            auto none_body = gen_prim(p, d - 1);
            auto some_body = scoped(y, rq, [&] { return gen_prim(p, d - 1); });
            Arm a{{Pattern::Kind::None, {}, {}, {}}, none_body};
            Arm b{{Pattern::Kind::Some, y, {}, {}}, some_body};
            if (coin(0.3)) std::swap(a, b);
            return mk::match(s, {a, b});
        }
        case 6: { // sequence
            auto u = gen_unit(d - 1);
            return mk::let("_", std::nullopt, u, gen_prim(p, d - 1));
        }
        case 7: { // accumulate through a loop
            if (loop_nesting_ >= cfg_.max_loop_nesting || d < 4 || p.is_bool()) return nullptr;
            const std::string r = binder();
            const Ty rt = Ty::ref(t);
            auto init = gen_prim(p, d - 2);
            return mk::let(r, rt, mk::ref(init), scoped(r, rt, [&] {
                               auto l = loop(d - 1);
                               return mk::let("_", std::nullopt, l, mk::deref(mk::var(r)));
                           }));
        }
        default: return nullptr;
        }
    }

    ExprPtr int_production(const PrimTy& p, int d) {
        const int r = pick(22);
        if (r < 8) return shared_production(p, d, r);
        switch (r) {
        case 8:
        case 9:
        case 10: {
            static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::And, BinOp::Or, BinOp::Xor};
            return mk::bop(ops[pick(6)], gen_prim(p, d - 1), gen_prim(p, d - 1));
        }
        case 11:
        case 12: {
            auto a = division_lhs(p, d - 1);
            auto b = division_rhs(p, d - 1);
            return mk::bop(coin(0.5) ? BinOp::Div : BinOp::Mod, a, b);
        }
        case 13: {
            auto a = gen_prim(p, d - 1);
            ExprPtr b = coin(0.6) ? mk::int_lit(p.is_signed() ? range(-2, p.bits + 2) : range(0, p.bits + 2), p)
                                  : gen_prim(p, d - 1);
            return mk::bop(coin(0.5) ? BinOp::Shl : BinOp::Shr, a, b);
        }
        case 14: return mk::uop({coin(0.5) ? UnOpKind::Neg : UnOpKind::BitNot, {}}, gen_prim(p, d - 1));
        case 15: return mk::cast(p, gen_prim(int_type(), d - 1));
        case 16: { // map lookup
            if (!have_map_ || p != PrimTy::long_() || d < 4) return nullptr;
            auto key = mk::int_lit(range(0, 3), PrimTy::long_());
            auto call = mk::call("bpf_map_lookup_elem", {mk::var("gmap"), mk::ref(key)});
            const std::string y = binder();
            const Ty rl = Ty::ref(Ty::int64());
            auto hit = scoped(y, rl, [&]() -> ExprPtr {
                if (coin(0.5)) return mk::deref(mk::var(y));
                auto bump = mk::assign(mk::var(y), mk::bop(BinOp::Add, mk::deref(mk::var(y)), lit(PrimTy::long_())));
                return mk::let("_", std::nullopt, bump, mk::deref(mk::var(y)));
            });
            return mk::match(call, {{{Pattern::Kind::None, {}, {}, {}}, gen_prim(p, d - 1)},
                                    {{Pattern::Kind::Some, y, {}, {}}, hit}});
        }
        case 17: {
            if (!cfg_.use_io || p != PrimTy::long_()) return nullptr;
            return mk::call("bpf_get_current_uid_gid", {});
        }
        case 18: {
            if (p != PrimTy::int_(16, Sign::Unsigned)) return nullptr;
            return mk::call("htons", {gen_prim(p, d - 1)});
        }
        case 19: return leaf(p);
        default: return nullptr;
        }
    }

    ExprPtr bool_production(int d) {
        const PrimTy b = PrimTy::boolean();
        const int r = pick(16);
        if (r < 8) return shared_production(b, d, r == 7 ? 1 : r);
        switch (r) {
        case 8:
        case 9:
        case 10: {
            static const BinOp ops[] = {BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge};
            const PrimTy q = int_type();
            return mk::bop(ops[pick(6)], gen_prim(q, d - 1), gen_prim(q, d - 1));
        }
        case 11: return mk::bop(coin(0.5) ? BinOp::LAnd : BinOp::LOr, gen_prim(b, d - 1), gen_prim(b, d - 1));
        case 12: return mk::uop({UnOpKind::LogNot, {}}, gen_prim(b, d - 1));
        case 13: return mk::bop(coin(0.5) ? BinOp::Eq : BinOp::Ne, gen_prim(b, d - 1), gen_prim(b, d - 1));
        default: return leaf(b);
        }
    }
};

} // namespace

uint64_t expr_size(const Expr& e) {
    uint64_t n = 1;
    for (const auto& k : e.kids) n += expr_size(*k);
    for (const auto& a : e.arms) n += expr_size(*a.body);
    return n;
}

uint64_t expr_depth(const Expr& e) {
    uint64_t d = 0;
    for (const auto& k : e.kids) d = std::max(d, expr_depth(*k));
    for (const auto& a : e.arms) d = std::max(d, expr_depth(*a.body));
    return d + 1;
}

uint64_t program_size(const Program& p) {
    uint64_t n = 0;
    for (const auto& d : p.decls)
        if (const auto* f = std::get_if<FunDecl>(&d)) n += expr_size(*f->body) + 1;
        else n += 1;
    return n;
}

uint64_t sub_seed(uint64_t seed, uint64_t i) {
    // splitmix64
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ExternalWorld generator_world() {
    ExternalWorld w;
    w.maps["gmap"][1] = 10;
    w.maps["gmap"][2] = -7;
    w.packet = parse_hex_bytes("ff ff ff ff ff ff 00 11 22 33 44 55 86 dd 60 00");
    return w;
}

Generated generate_program(uint64_t seed, const GenConfig& cfg) {
    for (uint64_t attempt = 0;; ++attempt) {
        const uint64_t s = attempt ? sub_seed(seed, attempt) : seed;
        Gen g(s, cfg);
        Program p = g.program();
        bool deep = false;
        for (const auto& d : p.decls)
            if (const auto* f = std::get_if<FunDecl>(&d); f && expr_depth(*f->body) > static_cast<uint64_t>(cfg.max_depth))
                deep = true;
        if (deep && attempt < 64) continue;
        try {
            Generated out;
            out.seed = seed;
            out.typed = check_program(p);
            out.program = p;
            out.source = print_program(p);
            return out;
        } catch (const CompileError&) {
            if (attempt >= 64) throw;
        }
    }
}

} // namespace beepl
