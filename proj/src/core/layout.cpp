// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "beepl/core.hpp"

namespace beepl {

namespace {

const Composite& lookup_struct(const std::string& id, const CompositeEnv& pi) {
    auto it = pi.find(id);
    if (it == pi.end()) throw CompileError("UnknownStruct", "unknown struct '" + id + "'");
    return it->second;
}

uint64_t round_up(uint64_t v, uint64_t a) { return a == 0 ? v : (v + a - 1) / a * a; }

} // namespace

uint64_t align_of(const Ty& t, const CompositeEnv& pi) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return static_cast<uint64_t>(t.prim().byte_size());
    case Ty::Kind::Array: return static_cast<uint64_t>(t.elem().byte_size());
    case Ty::Kind::Ref:
    case Ty::Kind::Option:
    case Ty::Kind::FunPtr:
    case Ty::Kind::Bytes: return 8;
    case Ty::Kind::Unit: return 1;
    case Ty::Kind::Struct: {
        uint64_t a = 1;
        for (const auto& f : lookup_struct(t.struct_id(), pi).fields) a = std::max(a, align_of(f.ty, pi));
        return a;
    }
    case Ty::Kind::Fun: break;
    }
    throw CompileError("NoSize", "function types have no size");
}

uint64_t size_of(const Ty& t, const CompositeEnv& pi) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return static_cast<uint64_t>(t.prim().byte_size());
    case Ty::Kind::Array: return static_cast<uint64_t>(t.elem().byte_size()) * t.len();
    case Ty::Kind::Ref:
    case Ty::Kind::Option:
    case Ty::Kind::FunPtr: return 8;
    case Ty::Kind::Bytes: return 16;
    case Ty::Kind::Unit: return 0;
    case Ty::Kind::Struct: {
        const auto layout = struct_layout(t.struct_id(), pi);
        uint64_t end = 0;
        for (const auto& f : layout) end = f.offset + size_of(f.ty, pi);
        return round_up(end, align_of(t, pi));
    }
    case Ty::Kind::Fun: break;
    }
    throw CompileError("NoSize", "function types have no size");
}

std::vector<FieldLayout> struct_layout(const std::string& id, const CompositeEnv& pi) {
    std::vector<FieldLayout> out;
    uint64_t off = 0;
    for (const auto& f : lookup_struct(id, pi).fields) {
        off = round_up(off, align_of(f.ty, pi));
        out.push_back({f.name, f.ty, off});
        off += size_of(f.ty, pi);
    }
    return out;
}

std::optional<FieldLayout> field_layout(const std::string& id, const std::string& field, const CompositeEnv& pi) {
    for (auto& f : struct_layout(id, pi))
        if (f.name == field) return f;
    return std::nullopt;
}

} // namespace beepl
