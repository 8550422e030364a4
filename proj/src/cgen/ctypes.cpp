// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <set>
#include <stdexcept>

#include "beepl/cgen.hpp"
#include "internal.hpp"

namespace beepl {

std::string c_prim(const PrimTy& p) {
    if (p.is_bool()) return "_Bool";
    return std::string(p.is_signed() ? "int" : "uint") + std::to_string(p.bits) + "_t";
}

std::string c_type(const Ty& t) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return c_prim(t.prim());
    case Ty::Kind::Ref:
        // Struct values are already carried by pointer.
        return t.inner().is(Ty::Kind::Struct) ? c_type(t.inner()) : c_type(t.inner()) + " *";
    case Ty::Kind::Option:
        if (!t.inner().is(Ty::Kind::Ref)) throw std::logic_error("function pointers are not lowered");
        return c_type(t.inner());
    case Ty::Kind::Struct: return "struct " + t.struct_id() + " *";
    case Ty::Kind::Bytes: return "bytes_t";
    case Ty::Kind::Unit: return "void";
    case Ty::Kind::Array: return c_prim(t.elem());
    default: throw std::logic_error("type " + to_string(t) + " has no C spelling");
    }
}

std::string c_literal(const PrimTy& p, int64_t v) {
    if (p.is_bool()) return v ? "1" : "0";
    if (p.bits == 64) {
        if (!p.is_signed()) return std::to_string(static_cast<uint64_t>(v)) + "ULL";
        if (v == INT64_MIN) return "(-9223372036854775807LL - 1)";
        return v < 0 ? "(" + std::to_string(v) + "LL)" : std::to_string(v) + "LL";
    }
    if (p.bits == 32) {
        if (!p.is_signed()) return std::to_string(static_cast<uint32_t>(v)) + "U";
        if (v == INT32_MIN) return "(-2147483647 - 1)";
        return v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
    }
    return "((" + c_prim(p) + ")" + std::to_string(v) + ")";
}

namespace cgen_detail {

std::string wide_unsigned(const PrimTy& p) { return p.bits == 64 ? "uint64_t" : "uint32_t"; }

const std::set<std::string>& reserved_c_names() {
    static const std::set<std::string> r = {
        "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else", "enum",
        "extern", "float", "for", "goto", "if", "inline", "int", "long", "register", "restrict", "return",
        "short", "signed", "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void",
        "volatile", "while", "_Bool", "_Alignas", "_Alignof", "_Atomic", "_Generic", "_Noreturn",
        "_Static_assert", "_Thread_local", "asm", "typeof", "NULL", "main", "printf", "exit", "SEC",
        "bytes_t", "int8_t", "int16_t", "int32_t", "int64_t", "uint8_t", "uint16_t", "uint32_t", "uint64_t",
        "size_t", "memcpy", "bool", "true", "false", "offsetof",
    };
    return r;
}

bool plain_identifier(const std::string& x) {
    if (x.empty()) return false;
    for (char c : x)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return !std::isdigit(static_cast<unsigned char>(x[0]));
}

std::optional<std::string> addressed_object(const std::string& p) {
    if (p.size() > 1 && p[0] == '&' && plain_identifier(p.substr(1))) return p.substr(1);
    return std::nullopt;
}

std::string sanitize(const std::string& x) {
    std::string out;
    for (char c : x) out += (c == '\'') ? std::string("_q") : std::string(1, c);
    return out;
}

} // namespace cgen_detail

} // namespace beepl
