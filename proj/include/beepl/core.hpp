// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "beepl/diagnostic.hpp"

namespace beepl {

// ---------------------------------------------------------------- effects

enum class EffectAtom { Divergence, Read, Write, Alloc, Io };

struct Effect {
    std::vector<EffectAtom> items;

    Effect() = default;
    Effect(std::initializer_list<EffectAtom> atoms) : items(atoms) {}

    [[nodiscard]] bool empty() const { return items.empty(); }
    [[nodiscard]] bool contains(EffectAtom a) const;
    bool operator==(const Effect&) const = default;
};

Effect effect_concat(const Effect& a, const Effect& b);
bool effect_subset(const Effect& a, const Effect& b);
bool effect_set_equal(const Effect& a, const Effect& b);
std::string to_string(EffectAtom a);
// Surface form, e.g. `<alloc,read>`.
std::string to_string(const Effect& e);
std::optional<EffectAtom> effect_atom_from_string(std::string_view s);

// ---------------------------------------------------------------- types

enum class Sign { Signed, Unsigned };

struct PrimTy {
    enum class Kind { Bool, Int, Long };
    Kind kind = Kind::Int;
    int bits = 32;
    Sign sign = Sign::Signed;

    static PrimTy boolean() { return {Kind::Bool, 8, Sign::Unsigned}; }
    static PrimTy int_(int bits, Sign s = Sign::Signed) { return {Kind::Int, bits, s}; }
    static PrimTy long_(Sign s = Sign::Signed) { return {Kind::Long, 64, s}; }
    static PrimTy int32() { return int_(32); }
    static PrimTy int64() { return long_(); }

    [[nodiscard]] bool is_bool() const { return kind == Kind::Bool; }
    [[nodiscard]] bool is_integer() const { return kind != Kind::Bool; }
    [[nodiscard]] bool is_signed() const { return kind != Kind::Bool && sign == Sign::Signed; }
    [[nodiscard]] int byte_size() const { return kind == Kind::Bool ? 1 : bits / 8; }
    [[nodiscard]] int64_t min_value() const;
    [[nodiscard]] uint64_t max_value() const;
    bool operator==(const PrimTy& o) const {
        return kind == o.kind && (kind == Kind::Bool || (bits == o.bits && sign == o.sign));
    }
};

std::string to_string(const PrimTy& p);
std::optional<PrimTy> prim_from_name(std::string_view name);

class Ty {
  public:
    enum class Kind { Prim, Ref, Option, Fun, FunPtr, Struct, Array, Bytes, Unit };

    Ty();
    static Ty prim(PrimTy p);
    static Ty ref(Ty basic);
    static Ty option(Ty pointer);
    static Ty fun(std::vector<Ty> args, Effect eff, Ty ret);
    static Ty fun_ptr(std::vector<Ty> args, Effect eff, Ty ret);
    static Ty struct_(std::string id);
    static Ty array(PrimTy elem, std::size_t len);
    static Ty bytes();
    static Ty unit();

    static Ty int32() { return prim(PrimTy::int32()); }
    static Ty int64() { return prim(PrimTy::int64()); }
    static Ty boolean() { return prim(PrimTy::boolean()); }

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] bool is(Kind k) const { return kind() == k; }
    [[nodiscard]] const PrimTy& prim() const;
    // Pointee of Ref, payload of Option.
    [[nodiscard]] const Ty& inner() const;
    [[nodiscard]] const std::vector<Ty>& args() const;
    [[nodiscard]] const Effect& eff() const;
    [[nodiscard]] const Ty& ret() const;
    [[nodiscard]] const std::string& struct_id() const;
    [[nodiscard]] PrimTy elem() const;
    [[nodiscard]] std::size_t len() const;

    [[nodiscard]] bool is_prim() const { return is(Kind::Prim); }
    [[nodiscard]] bool is_integer() const { return is_prim() && prim().is_integer(); }
    [[nodiscard]] bool is_bool() const { return is_prim() && prim().is_bool(); }
    [[nodiscard]] bool is_pointer() const { return is(Kind::Ref) || is(Kind::FunPtr); }
    [[nodiscard]] bool is_basic() const { return is_prim() || is(Kind::Struct) || is(Kind::Array); }

    bool operator==(const Ty& o) const;
    bool operator!=(const Ty& o) const { return !(*this == o); }

    struct Node;
    explicit Ty(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  private:
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Ty& t);

// ---------------------------------------------------------------- composites

struct Field {
    std::string name;
    Ty ty;
};

struct Composite {
    std::string id;
    std::vector<Field> fields;
};

using CompositeEnv = std::map<std::string, Composite>;

struct FieldLayout {
    std::string name;
    Ty ty;
    uint64_t offset = 0;
};

uint64_t size_of(const Ty& t, const CompositeEnv& pi);
uint64_t align_of(const Ty& t, const CompositeEnv& pi);
std::vector<FieldLayout> struct_layout(const std::string& id, const CompositeEnv& pi);
std::optional<FieldLayout> field_layout(const std::string& id, const std::string& field, const CompositeEnv& pi);

// ---------------------------------------------------------------- expressions

enum class BinOp { Add, Sub, Mul, Div, Mod, And, Or, Xor, Shl, Shr, Eq, Ne, Lt, Le, Gt, Ge, LAnd, LOr };

enum class UnOpKind { Neg, LogNot, BitNot, Cast };

struct UnOp {
    UnOpKind kind = UnOpKind::Neg;
    PrimTy target{}; // Cast only
    bool operator==(const UnOp& o) const { return kind == o.kind && (kind != UnOpKind::Cast || target == o.target); }
};

enum class PrimOpKind { Deref, Assign, Ref, Uop, Bop };

enum class Dir { Up, Down };

std::string to_string(BinOp op);
bool is_comparison(BinOp op);
bool is_logical(BinOp op);
bool is_shift(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Pattern {
    enum class Kind { None, Some, Bytes, Wild };
    Kind kind = Kind::Wild;
    std::string binder;        // Some, Bytes
    Ty target;                 // Bytes
    std::vector<Field> fields; // Bytes field binders
    bool operator==(const Pattern& o) const;
};

struct Arm {
    Pattern pat;
    ExprPtr body;
};

enum class ExprKind {
    Var,
    ConstInt,
    ConstLong,
    ConstBool,
    App,
    Prim,
    Let,
    Cond,
    StructInit,
    Field,
    NoneLit,
    SomeLit,
    Match,
    For,
    UnitLit,
    // Internal forms, produced only during evaluation.
    Loc,
    BytesVal,
    StructVal,
    Repeat,
    Undef,
};

// Immutable node. Children layout by kind:
//   App [callee, args...]  Prim [operands...]  Let [bound, body]  Cond [guard, then, else]
//   StructInit [field values...]  Field [target]  SomeLit [inner]  Match [scrutinee] + arms
//   For [lo, hi, body]  Repeat [template, current]
struct Expr {
    ExprKind kind = ExprKind::UnitLit;
    std::string name; // Var, Let binder, StructInit/StructVal struct id, Field name
    int64_t ival = 0; // literal bits, Repeat remaining count, Loc/BytesVal/StructVal offset
    bool bval = false;
    PrimTy lit_ty{};
    bool polymorphic = false; // unsuffixed literal whose type is fixed by context
    PrimOpKind op = PrimOpKind::Deref;
    BinOp bop = BinOp::Add;
    UnOp uop{};
    std::optional<Ty> ty; // Let declared type, NoneLit option type
    Dir dir = Dir::Up;
    uint64_t block = 0; // Loc, BytesVal, StructVal
    uint64_t len = 0;   // BytesVal
    std::vector<ExprPtr> kids;
    std::vector<std::string> field_names; // StructInit
    std::vector<Arm> arms;
    Span span;
    // Type recorded by the checker on elaborated nodes.
    std::optional<Ty> annot;
};

bool operator==(const Expr& a, const Expr& b);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

namespace mk {
ExprPtr var(std::string x, Span sp = {});
ExprPtr int_lit(int64_t v, PrimTy t = PrimTy::int32(), bool polymorphic = false, Span sp = {});
ExprPtr poly_lit(int64_t v, Span sp = {});
ExprPtr long_lit(int64_t v, Sign s = Sign::Signed, bool polymorphic = false, Span sp = {});
ExprPtr bool_lit(bool b, Span sp = {});
ExprPtr unit(Span sp = {});
ExprPtr app(ExprPtr callee, std::vector<ExprPtr> args, Span sp = {});
ExprPtr call(const std::string& f, std::vector<ExprPtr> args, Span sp = {});
ExprPtr deref(ExprPtr e, Span sp = {});
ExprPtr assign(ExprPtr lhs, ExprPtr rhs, Span sp = {});
ExprPtr ref(ExprPtr e, Span sp = {});
ExprPtr uop(UnOp op, ExprPtr e, Span sp = {});
ExprPtr cast(PrimTy target, ExprPtr e, Span sp = {});
ExprPtr bop(BinOp op, ExprPtr a, ExprPtr b, Span sp = {});
ExprPtr let(std::string x, std::optional<Ty> t, ExprPtr bound, ExprPtr body, Span sp = {});
ExprPtr cond(ExprPtr g, ExprPtr t, ExprPtr e, Span sp = {});
ExprPtr struct_init(std::string id, std::vector<std::string> fields, std::vector<ExprPtr> vals, Span sp = {});
ExprPtr field(ExprPtr target, std::string f, Span sp = {});
ExprPtr none(std::optional<Ty> t = std::nullopt, Span sp = {});
ExprPtr some(ExprPtr e, Span sp = {});
ExprPtr match(ExprPtr scrutinee, std::vector<Arm> arms, Span sp = {});
ExprPtr for_(ExprPtr lo, ExprPtr hi, Dir d, ExprPtr body, Span sp = {});
ExprPtr loc(uint64_t block, int64_t offset = 0);
ExprPtr bytes_val(uint64_t block, int64_t offset, uint64_t len);
ExprPtr struct_val(uint64_t block, int64_t offset, std::string id);
ExprPtr repeat(int64_t remaining, ExprPtr tmpl, ExprPtr current);
ExprPtr undef();
} // namespace mk

// Shallow copy with one child replaced.
ExprPtr with_kid(const Expr& e, std::size_t i, ExprPtr k);
ExprPtr with_arm_body(const Expr& e, std::size_t i, ExprPtr body);

bool is_value(const Expr& e);
bool is_internal(const Expr& e);
bool contains_internal(const Expr& e);

std::set<std::string> fvar(const Expr& e);

// ---------------------------------------------------------------- values

struct Value {
    enum class Kind { Unit, Bool, Int, Long, Loc, OptNone, OptSome, Bytes, StructRef, Undef };
    Kind kind = Kind::Unit;
    PrimTy prim{};     // Int, Long
    int64_t i = 0;     // Bool, Int, Long (normalised to prim width)
    uint64_t block = 0;
    int64_t offset = 0;
    uint64_t len = 0;  // Bytes
    std::string id;    // StructRef
    std::optional<Ty> none_ty; // OptNone

    static Value unit() { return {}; }
    static Value boolean(bool b);
    static Value integer(PrimTy p, int64_t v);
    static Value loc(uint64_t b, int64_t o = 0);
    static Value opt_none(Ty t);
    static Value opt_some(uint64_t b, int64_t o = 0);
    static Value bytes(uint64_t b, int64_t o, uint64_t len);
    static Value struct_ref(uint64_t b, int64_t o, std::string id);
    static Value undef();

    [[nodiscard]] bool is_undef() const { return kind == Kind::Undef; }
    bool operator==(const Value& o) const;
};

// Wrap a raw bit pattern to the width and signedness of p.
int64_t normalize(const PrimTy& p, uint64_t raw);

std::string to_string(const Value& v);
ExprPtr value_to_expr(const Value& v);
std::optional<Value> expr_to_value(const Expr& e);

// ---------------------------------------------------------------- programs

struct FunDecl {
    std::string name;
    std::optional<std::string> sec;
    Ty rt;
    std::optional<Effect> ef;
    std::string cc = "default";
    std::vector<std::pair<std::string, Ty>> args;
    std::vector<std::pair<std::string, Ty>> vars;
    ExprPtr body;
    bool flag = false;
    Span span;
};

struct ExtDecl {
    std::string name;
    std::vector<Ty> args;
    Ty ret;
    Effect ef;
    std::string cc = "default";
    Span span;
};

struct GlobDecl {
    std::string name;
    Ty ty;
    std::variant<std::monostate, int64_t, bool, std::string> init;
    std::optional<std::string> sec;
    bool is_map = false;
    Span span;
};

using Decl = std::variant<FunDecl, ExtDecl, GlobDecl>;

struct Program {
    std::vector<Decl> decls;
    std::vector<Composite> composites;
};

const std::string& decl_name(const Decl& d);

} // namespace beepl
