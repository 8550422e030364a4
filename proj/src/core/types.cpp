// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cassert>

#include "beepl/core.hpp"

namespace beepl {

bool Effect::contains(EffectAtom a) const { return std::find(items.begin(), items.end(), a) != items.end(); }

Effect effect_concat(const Effect& a, const Effect& b) {
    Effect r = a;
    r.items.insert(r.items.end(), b.items.begin(), b.items.end());
    return r;
}

bool effect_subset(const Effect& a, const Effect& b) {
    return std::all_of(a.items.begin(), a.items.end(), [&](EffectAtom x) { return b.contains(x); });
}

bool effect_set_equal(const Effect& a, const Effect& b) { return effect_subset(a, b) && effect_subset(b, a); }

std::string to_string(EffectAtom a) {
    switch (a) {
    case EffectAtom::Divergence: return "div";
    case EffectAtom::Read: return "read";
    case EffectAtom::Write: return "write";
    case EffectAtom::Alloc: return "alloc";
    case EffectAtom::Io: return "io";
    }
    return "?";
}

std::string to_string(const Effect& e) {
    std::string s = "<";
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) s += ",";
        s += to_string(e.items[i]);
    }
    return s + ">";
}

std::optional<EffectAtom> effect_atom_from_string(std::string_view s) {
    if (s == "div" || s == "divergence") return EffectAtom::Divergence;
    if (s == "read") return EffectAtom::Read;
    if (s == "write") return EffectAtom::Write;
    if (s == "alloc") return EffectAtom::Alloc;
    if (s == "io") return EffectAtom::Io;
    return std::nullopt;
}

int64_t PrimTy::min_value() const {
    if (!is_signed()) return 0;
    return bits == 64 ? INT64_MIN : -(int64_t{1} << (bits - 1));
}

uint64_t PrimTy::max_value() const {
    if (is_bool()) return 1;
    if (bits == 64) return is_signed() ? static_cast<uint64_t>(INT64_MAX) : UINT64_MAX;
    return is_signed() ? (uint64_t{1} << (bits - 1)) - 1 : (uint64_t{1} << bits) - 1;
}

std::string to_string(const PrimTy& p) {
    switch (p.kind) {
    case PrimTy::Kind::Bool: return "bool";
    case PrimTy::Kind::Long: return p.sign == Sign::Signed ? "long" : "ulong";
    case PrimTy::Kind::Int:
        if (p.bits == 32) return p.sign == Sign::Signed ? "int" : "uint";
        return (p.sign == Sign::Signed ? "int" : "uint") + std::to_string(p.bits);
    }
    return "?";
}

std::optional<PrimTy> prim_from_name(std::string_view n) {
    if (n == "bool") return PrimTy::boolean();
    if (n == "int8" || n == "char") return PrimTy::int_(8);
    if (n == "uint8") return PrimTy::int_(8, Sign::Unsigned);
    if (n == "int16") return PrimTy::int_(16);
    if (n == "uint16") return PrimTy::int_(16, Sign::Unsigned);
    if (n == "int" || n == "int32") return PrimTy::int_(32);
    if (n == "uint" || n == "uint32") return PrimTy::int_(32, Sign::Unsigned);
    if (n == "long" || n == "int64") return PrimTy::long_();
    if (n == "ulong" || n == "uint64") return PrimTy::long_(Sign::Unsigned);
    return std::nullopt;
}

struct Ty::Node {
    Kind kind = Kind::Unit;
    PrimTy prim{};
    std::vector<Ty> tys;   // Ref/Option: [inner]; Fun/FunPtr: [ret]
    std::vector<Ty> fargs; // Fun/FunPtr
    Effect eff;
    std::string id;
    std::size_t len = 0;
};

namespace {
std::shared_ptr<const Ty::Node> unit_node() {
    static const auto n = std::make_shared<const Ty::Node>();
    return n;
}
} // namespace

Ty::Ty() : node_(unit_node()) {}

Ty Ty::prim(PrimTy p) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prim;
    n->prim = p;
    return Ty(std::move(n));
}

Ty Ty::ref(Ty basic) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Ref;
    n->tys = {std::move(basic)};
    return Ty(std::move(n));
}

Ty Ty::option(Ty pointer) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Option;
    n->tys = {std::move(pointer)};
    return Ty(std::move(n));
}

static Ty make_fun(Ty::Kind k, std::vector<Ty> args, Effect eff, Ty ret, auto ctor) {
    auto n = std::make_shared<Ty::Node>();
    n->kind = k;
    n->fargs = std::move(args);
    n->tys = {std::move(ret)};
    n->eff = std::move(eff);
    return ctor(std::move(n));
}

Ty Ty::fun(std::vector<Ty> args, Effect eff, Ty ret) {
    return make_fun(Kind::Fun, std::move(args), std::move(eff), std::move(ret),
                    [](std::shared_ptr<const Node> n) { return Ty(std::move(n)); });
}

Ty Ty::fun_ptr(std::vector<Ty> args, Effect eff, Ty ret) {
    return make_fun(Kind::FunPtr, std::move(args), std::move(eff), std::move(ret),
                    [](std::shared_ptr<const Node> n) { return Ty(std::move(n)); });
}

Ty Ty::struct_(std::string id) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Struct;
    n->id = std::move(id);
    return Ty(std::move(n));
}

Ty Ty::array(PrimTy elem, std::size_t len) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Array;
    n->prim = elem;
    n->len = len;
    return Ty(std::move(n));
}

Ty Ty::bytes() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bytes;
    return Ty(std::move(n));
}

Ty Ty::unit() { return Ty(); }

Ty::Kind Ty::kind() const { return node_->kind; }

const PrimTy& Ty::prim() const {
    assert(node_->kind == Kind::Prim);
    return node_->prim;
}

const Ty& Ty::inner() const {
    assert(node_->kind == Kind::Ref || node_->kind == Kind::Option);
    return node_->tys[0];
}

const std::vector<Ty>& Ty::args() const { return node_->fargs; }

const Effect& Ty::eff() const { return node_->eff; }

const Ty& Ty::ret() const {
    assert(node_->kind == Kind::Fun || node_->kind == Kind::FunPtr);
    return node_->tys.back();
}

const std::string& Ty::struct_id() const { return node_->id; }
PrimTy Ty::elem() const { return node_->prim; }
std::size_t Ty::len() const { return node_->len; }

bool Ty::operator==(const Ty& o) const {
    if (node_ == o.node_) return true;
    const Node& a = *node_;
    const Node& b = *o.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Kind::Prim: return a.prim == b.prim;
    case Kind::Struct: return a.id == b.id;
    case Kind::Array: return a.prim == b.prim && a.len == b.len;
    case Kind::Bytes:
    case Kind::Unit: return true;
    case Kind::Ref:
    case Kind::Option: return a.tys == b.tys;
    case Kind::Fun:
    case Kind::FunPtr: return a.tys == b.tys && a.fargs == b.fargs && effect_set_equal(a.eff, b.eff);
    }
    return false;
}

std::string to_string(const Ty& t) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return to_string(t.prim());
    case Ty::Kind::Ref: return to_string(t.inner()) + "*";
    case Ty::Kind::Option: return "option(" + to_string(t.inner()) + ")";
    case Ty::Kind::Struct: return "struct " + t.struct_id();
    case Ty::Kind::Array: return to_string(t.elem()) + "[" + std::to_string(t.len()) + "]";
    case Ty::Kind::Bytes: return "bytes";
    case Ty::Kind::Unit: return "unit";
    case Ty::Kind::Fun:
    case Ty::Kind::FunPtr: {
        std::string s = t.kind() == Ty::Kind::Fun ? "fun(" : "funptr(";
        const auto& a = t.args();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i) s += ", ";
            s += to_string(a[i]);
        }
        return s + ") -> " + to_string(t.ret()) + " " + to_string(t.eff());
    }
    }
    return "?";
}

std::string to_string(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::And: return "&";
    case BinOp::Or: return "|";
    case BinOp::Xor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::LAnd: return "&&";
    case BinOp::LOr: return "||";
    }
    return "?";
}

bool is_comparison(BinOp op) {
    switch (op) {
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return true;
    default: return false;
    }
}

bool is_logical(BinOp op) { return op == BinOp::LAnd || op == BinOp::LOr; }
bool is_shift(BinOp op) { return op == BinOp::Shl || op == BinOp::Shr; }

const std::string& decl_name(const Decl& d) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

} // namespace beepl
