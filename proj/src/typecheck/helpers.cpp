// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/typecheck.hpp"

namespace beepl {

const ExtSig* HelperRegistry::lookup(const std::string& name) const {
    auto it = entries.find(name);
    return it == entries.end() ? nullptr : &it->second;
}

HelperRegistry default_helper_registry() {
    HelperRegistry r;
    const Ty map_ptr = Ty::ref(Ty::struct_("bpf_map"));
    const Ty long_ptr = Ty::ref(Ty::int64());
    const Ty u16 = Ty::prim(PrimTy::int_(16, Sign::Unsigned));

    r.entries["bpf_map_lookup_elem"] = {"bpf_map_lookup_elem",
                                        {Ty::option(map_ptr), Ty::option(long_ptr)},
                                        {EffectAtom::Read, EffectAtom::Io},
                                        Ty::option(long_ptr)};
    r.entries["bpf_get_current_uid_gid"] = {"bpf_get_current_uid_gid", {}, {EffectAtom::Io}, Ty::int64()};
    r.entries["htons"] = {"htons", {u16}, {}, u16};

    r.constants["XDP_ABORTED"] = {"XDP_ABORTED", PrimTy::int32(), 0};
    r.constants["XDP_DROP"] = {"XDP_DROP", PrimTy::int32(), 1};
    r.constants["XDP_PASS"] = {"XDP_PASS", PrimTy::int32(), 2};
    r.constants["ETH_P_IPV6"] = {"ETH_P_IPV6", PrimTy::int_(16, Sign::Unsigned), 0x86DD};

    const PrimTy u8 = PrimTy::int_(8, Sign::Unsigned);
    r.composites.push_back(
        {"ethhdr", {{"h_dest", Ty::array(u8, 6)}, {"h_source", Ty::array(u8, 6)}, {"h_proto", u16}}});
    r.composites.push_back({"xdp_md", {{"data", Ty::bytes()}}});
    r.composites.push_back({"__sk_buff", {{"data", Ty::bytes()}}});
    r.composites.push_back({"bpf_map", {{"id", Ty::prim(PrimTy::int_(32, Sign::Unsigned))}}});
    return r;
}

TypingContext context_from_registry(const HelperRegistry& reg) {
    TypingContext ctx;
    ctx.psi = reg.entries;
    ctx.constants = reg.constants;
    for (const auto& c : reg.composites) ctx.pi[c.id] = c;
    return ctx;
}

bool section_ok(const Ty& t, const std::optional<std::string>& sec) {
    if (!sec) return true;
    if (t.is(Ty::Kind::Option) && t.inner().is(Ty::Kind::Ref) && t.inner().inner().is(Ty::Kind::Struct)) {
        const std::string& id = t.inner().inner().struct_id();
        if (id == "xdp_md") return *sec == "xdp";
        if (id == "__sk_buff") return *sec == "socket";
    }
    return true;
}

} // namespace beepl
