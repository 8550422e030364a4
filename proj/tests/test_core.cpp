// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "beepl/core.hpp"
#include "beepl/typecheck.hpp"

using namespace beepl;

TEST_CASE("effect concatenation keeps order and multiplicity") {
    const Effect a{EffectAtom::Alloc, EffectAtom::Read};
    const Effect b{EffectAtom::Read, EffectAtom::Write};
    const Effect c = effect_concat(a, b);
    REQUIRE(c.items.size() == 4);
    CHECK(to_string(c) == "<alloc,read,read,write>");
    CHECK(effect_subset(a, c));
    CHECK_FALSE(effect_subset(c, a));
    CHECK(effect_set_equal(Effect{EffectAtom::Read, EffectAtom::Read}, Effect{EffectAtom::Read}));
    CHECK(effect_subset(Effect{}, Effect{}));
}

TEST_CASE("effect atoms parse from their surface names") {
    for (auto a : {EffectAtom::Divergence, EffectAtom::Read, EffectAtom::Write, EffectAtom::Alloc, EffectAtom::Io})
        CHECK(effect_atom_from_string(to_string(a)) == a);
    CHECK_FALSE(effect_atom_from_string("nonsense").has_value());
}

TEST_CASE("primitive ranges") {
    CHECK(PrimTy::int_(8).min_value() == -128);
    CHECK(PrimTy::int_(8).max_value() == 127);
    CHECK(PrimTy::int_(16, Sign::Unsigned).max_value() == 65535);
    CHECK(PrimTy::long_().min_value() == INT64_MIN);
    CHECK(PrimTy::long_(Sign::Unsigned).max_value() == UINT64_MAX);
    CHECK(PrimTy::boolean().byte_size() == 1);
}

TEST_CASE("normalize wraps to width and sign") {
    CHECK(normalize(PrimTy::int_(8), 0x80) == -128);
    CHECK(normalize(PrimTy::int_(8, Sign::Unsigned), 0x1ff) == 255);
    CHECK(normalize(PrimTy::int32(), 0x100000000ULL) == 0);
    CHECK(normalize(PrimTy::int32(), 0xffffffffULL) == -1);
    CHECK(normalize(PrimTy::int_(32, Sign::Unsigned), 0xffffffffULL) == 0xffffffffLL);
    CHECK(normalize(PrimTy::long_(Sign::Unsigned), UINT64_MAX) == -1);
}

TEST_CASE("structural type equality") {
    CHECK(Ty::ref(Ty::int32()) == Ty::ref(Ty::int32()));
    CHECK(Ty::ref(Ty::int32()) != Ty::ref(Ty::int64()));
    CHECK(Ty::option(Ty::ref(Ty::int64())) != Ty::ref(Ty::int64()));
    CHECK(Ty::struct_("a") != Ty::struct_("b"));
    CHECK(to_string(Ty::option(Ty::ref(Ty::int64()))) == "option(long*)");
}

TEST_CASE("struct layout follows natural alignment") {
    const CompositeEnv pi = context_from_registry(default_helper_registry()).pi;
    CHECK(size_of(Ty::struct_("ethhdr"), pi) == 14);
    const auto proto = field_layout("ethhdr", "h_proto", pi);
    REQUIRE(proto);
    CHECK(proto->offset == 12);

    CompositeEnv mixed = pi;
    mixed["m"] = Composite{"m", {{"a", Ty::prim(PrimTy::int_(8))}, {"b", Ty::int32()}, {"c", Ty::prim(PrimTy::int_(16))}}};
    CHECK(size_of(Ty::struct_("m"), mixed) == 12);
    CHECK(align_of(Ty::struct_("m"), mixed) == 4);
    CHECK(field_layout("m", "b", mixed)->offset == 4);
    CHECK(field_layout("m", "c", mixed)->offset == 8);
}

TEST_CASE("free variables respect binders") {
    auto e = mk::let("x", Ty::int32(), mk::var("y"),
                     mk::bop(BinOp::Add, mk::var("x"), mk::var("z")));
    CHECK(fvar(*e) == std::set<std::string>{"y", "z"});
    auto m = mk::match(mk::var("p"), {{{Pattern::Kind::None, {}, {}, {}}, mk::int_lit(0)},
                                      {{Pattern::Kind::Some, "q", {}, {}}, mk::deref(mk::var("q"))}});
    CHECK(fvar(*m) == std::set<std::string>{"p"});
}

TEST_CASE("values round trip through expressions") {
    for (const Value& v : {Value::integer(PrimTy::int_(16), -3), Value::boolean(true), Value::unit(),
                           Value::loc(4, 0), Value::opt_none(Ty::option(Ty::ref(Ty::int32())))}) {
        auto e = value_to_expr(v);
        REQUIRE(is_value(*e));
        auto back = expr_to_value(*e);
        REQUIRE(back);
        CHECK(*back == v);
    }
}
