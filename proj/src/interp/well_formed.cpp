// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "beepl/interp.hpp"

namespace beepl {

namespace {

bool initialised(const State& s, const Binding& b) {
    const Block* blk = s.theta.block(b.block);
    if (!blk) return false;
    if (b.ty.is(Ty::Kind::Array)) return blk->raw.size() >= blk->size;
    if (b.ty.is(Ty::Kind::Struct)) {
        for (const auto& f : struct_layout(b.ty.struct_id(), s.pi))
            if (f.ty.is_prim() && !blk->cells.count(static_cast<int64_t>(f.offset))) return false;
        return true;
    }
    return blk->cells.count(0) != 0;
}

} // namespace

WellFormedReport well_formed_report(const State& s) {
    WellFormedReport r;
    auto bad = [&](std::string v) {
        r.ok = false;
        r.violations.push_back(std::move(v));
    };

    // Variables resolve through Ω or Δ to initialised, Σ-typed blocks.
    auto check_vars = [&](const std::map<std::string, Binding>& env, const char* where) {
        for (const auto& [x, b] : env) {
            auto sig = s.sigma.find(b.block);
            if (sig == s.sigma.end()) {
                bad(std::string(where) + " variable '" + x + "' has no store typing");
                continue;
            }
            if (sig->second != Ty::ref(b.ty)) bad(std::string(where) + " variable '" + x + "' has mismatched type");
            if (!initialised(s, b)) bad(std::string(where) + " variable '" + x + "' is not initialised");
            if (b.ty.is(Ty::Kind::Struct) && !s.pi.count(b.ty.struct_id()))
                bad("variable '" + x + "' has unknown struct " + b.ty.struct_id());
        }
    };
    check_vars(s.omega, "local");
    check_vars(s.globals, "global");

    for (const auto& [x, b] : s.omega)
        if (s.globals.count(x) || (s.funs && s.funs->count(x))) bad("'" + x + "' is bound both locally and globally");

    // Σ-typed blocks are exactly the valid Freeable blocks.
    for (const auto& [b, t] : s.sigma) {
        const Block* blk = s.theta.block(b);
        if (!blk) {
            bad("block " + std::to_string(b) + " is typed but not allocated");
            continue;
        }
        if (blk->perm != Perm::Freeable) bad("block " + std::to_string(b) + " is typed but not freeable");
        if (!t.is(Ty::Kind::Ref)) bad("block " + std::to_string(b) + " has a non-reference store type");
    }
    for (const auto& [b, blk] : s.theta.blocks())
        if (blk.perm == Perm::Freeable && !s.sigma.count(b))
            bad("block " + std::to_string(b) + " is freeable but untyped");

    // Function declarations keep parameters and locals apart.
    if (s.funs) {
        for (const auto& [name, fd] : *s.funs) {
            std::set<std::string> seen;
            for (const auto& a : fd.args) seen.insert(a.first);
            for (const auto& v : fd.vars)
                if (seen.count(v.first)) bad("function '" + name + "' reuses '" + v.first + "' as arg and var");
        }
    }
    return r;
}

bool well_formed(const State& s) { return well_formed_report(s).ok; }

} // namespace beepl
