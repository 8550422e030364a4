// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include "beepl/driver.hpp"

namespace beepl {

namespace {

void preorder(const ExprPtr& e, std::vector<ExprPtr>& out) {
    out.push_back(e);
    for (const auto& k : e->kids) preorder(k, out);
    for (const auto& a : e->arms) preorder(a.body, out);
}

// Rebuilds e with the node at preorder index `target` replaced by r.
ExprPtr replace_at(const ExprPtr& e, std::size_t& idx, std::size_t target, const ExprPtr& r) {
    if (idx++ == target) return r;
    ExprPtr cur = e;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        ExprPtr k = replace_at(e->kids[i], idx, target, r);
        if (k != e->kids[i]) return with_kid(*cur, i, k);
        if (idx > target) return cur;
    }
    for (std::size_t i = 0; i < e->arms.size(); ++i) {
        ExprPtr b = replace_at(e->arms[i].body, idx, target, r);
        if (b != e->arms[i].body) return with_arm_body(*cur, i, b);
        if (idx > target) return cur;
    }
    return cur;
}

std::vector<ExprPtr> replacements(const ExprPtr& e) {
    std::vector<ExprPtr> out;
    auto same_type = [&](const ExprPtr& k) { return e->annot && k->annot && *k->annot == *e->annot; };
    for (const auto& k : e->kids)
        if (same_type(k)) out.push_back(k);
    for (const auto& a : e->arms)
        if (same_type(a.body)) out.push_back(a.body);
    if (e->annot) {
        const Ty& t = *e->annot;
        if (t.is_bool()) out.push_back(mk::bool_lit(false));
        else if (t.is_integer()) {
            if (!(e->kind == ExprKind::ConstInt || e->kind == ExprKind::ConstLong) || e->ival != 0)
                out.push_back(mk::int_lit(0, t.prim()));
            if (e->kind == ExprKind::ConstInt || e->kind == ExprKind::ConstLong) {
                if (e->ival != 1) out.push_back(mk::int_lit(1, t.prim()));
                if (e->ival / 2 != 0) out.push_back(mk::int_lit(e->ival / 2, t.prim()));
            }
        } else if (t.is(Ty::Kind::Unit) && e->kind != ExprKind::UnitLit) {
            out.push_back(mk::unit());
        }
    }
    return out;
}

std::vector<Program> candidates(const Program& p) {
    std::vector<Program> out;
    // Drop a whole declaration.
    for (std::size_t i = 0; i < p.decls.size(); ++i) {
        if (const auto* f = std::get_if<FunDecl>(&p.decls[i]); f && f->name == "main") continue;
        Program q = p;
        q.decls.erase(q.decls.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(std::move(q));
    }
    // Replace one subexpression.
    for (std::size_t i = 0; i < p.decls.size(); ++i) {
        const auto* f = std::get_if<FunDecl>(&p.decls[i]);
        if (!f) continue;
        std::vector<ExprPtr> nodes;
        preorder(f->body, nodes);
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            for (const auto& r : replacements(nodes[n])) {
                std::size_t idx = 0;
                Program q = p;
                std::get<FunDecl>(q.decls[i]).body = replace_at(f->body, idx, n, r);
                out.push_back(std::move(q));
            }
        }
    }
    return out;
}

} // namespace

Program shrink_program(const Program& p, const std::function<bool(const TypedProgram&)>& still_fails, int max_rounds) {
    Program current;
    try {
        current = check_program(p).program;
    } catch (const CompileError&) {
        return p;
    }
    for (int round = 0; round < max_rounds; ++round) {
        const uint64_t size = program_size(current);
        bool improved = false;
        for (auto& c : candidates(current)) {
            if (program_size(c) >= size) continue;
            TypedProgram tp;
            try {
                tp = check_program(c);
            } catch (const CompileError&) {
                continue;
            }
            if (!still_fails(tp)) continue;
            current = tp.program;
            improved = true;
            break;
        }
        if (!improved) break;
    }
    return current;
}

} // namespace beepl
