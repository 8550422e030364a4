// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "beepl/core.hpp"

namespace beepl {

struct ExtSig {
    std::string name;
    std::vector<Ty> args;
    Effect eff;
    Ty ret;
};

struct FunSig {
    std::vector<Ty> args;
    Effect eff;
    Ty ret;
};

struct Constant {
    std::string name;
    PrimTy ty;
    int64_t value = 0;
};

struct HelperRegistry {
    std::map<std::string, ExtSig> entries;
    std::map<std::string, Constant> constants;
    std::vector<Composite> composites;

    [[nodiscard]] const ExtSig* lookup(const std::string& name) const;
};

HelperRegistry default_helper_registry();

struct TypingContext {
    std::map<std::string, Ty> gamma;
    std::map<uint64_t, Ty> sigma;
    CompositeEnv pi;
    std::map<std::string, ExtSig> psi;
    std::map<std::string, FunSig> funs;
    std::map<std::string, Ty> globals;
    std::map<std::string, Constant> constants;
    // Functions declared later in the program; calling them is a forward reference.
    std::set<std::string> later_funs;
};

TypingContext context_from_registry(const HelperRegistry& reg);

struct Derivation {
    std::string rule;
    Ty ty;
    Effect eff;
    ExprPtr expr;
    std::vector<Derivation> premises;
};

struct Typing {
    Ty ty;
    Effect eff;
    ExprPtr elaborated;
    std::shared_ptr<Derivation> derivation;
};

// Γ,Σ,Π,Ψ ⊢ e : τ, η. Throws CompileError on ill-typed input.
std::pair<Ty, Effect> infer_expr(const TypingContext& ctx, const ExprPtr& e);

// As infer_expr, also returning the elaborated expression (literal types fixed, let types filled,
// constants folded, implicit Some inserted) and optionally the derivation tree.
Typing elaborate_expr(const TypingContext& ctx, const ExprPtr& e, const std::optional<Ty>& hint = std::nullopt,
                      bool with_derivation = false);

bool section_ok(const Ty& t, const std::optional<std::string>& sec);

// Throws CompileError if t violates the type grammar invariants.
void validate_type(const Ty& t, const CompositeEnv& pi, Span sp = {});

struct TypedFunDecl {
    FunDecl decl; // elaborated body
    Effect inferred;
    Effect effect; // declared if annotated, else inferred
    std::shared_ptr<Derivation> derivation;
};

struct TypedProgram {
    Program program; // elaborated
    std::map<std::string, TypedFunDecl> funs;
    std::vector<std::string> fun_order;
    TypingContext ctx; // Π, Ψ, all function signatures, globals, constants

    [[nodiscard]] const FunDecl* fun(const std::string& name) const;
    [[nodiscard]] std::optional<std::string> entry_point() const;
};

TypedFunDecl check_fun_decl(const TypingContext& ctx, const FunDecl& fd, bool with_derivation = false);
TypedProgram check_program(const Program& p, const HelperRegistry& reg = default_helper_registry(),
                           bool with_derivation = false);

// Expressions built only from unsuffixed literals and arithmetic over them.
bool is_poly(const Expr& e);

} // namespace beepl
