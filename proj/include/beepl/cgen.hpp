// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beepl/core.hpp"
#include "beepl/interp.hpp"
#include "beepl/typecheck.hpp"

namespace beepl {

enum class CMode { Host, Ebpf };

// How a pointer variable became safe to dereference.
enum class SafeKind { AddrOfLocal, BoundsCast, OptionGuardedCopy, RefParam, Copy };

// Statement tree kept alongside the text so the dereference audit can follow control flow.
struct CStmt {
    enum class Kind { Block, Line, If, For };
    Kind kind = Kind::Line;
    std::string text;                    // Line: statement; If: condition; For: header
    std::vector<CStmt> body;             // Block items, If then-branch, For body
    std::vector<CStmt> orelse;           // If else-branch
    std::vector<std::string> derefs;     // Line: pointers read through `*p` or `p->`
    std::optional<std::string> defines;  // Line: pointer variable made safe here
    SafeKind safe_kind = SafeKind::Copy; // with `defines`
    std::optional<std::string> source;   // with SafeKind::Copy: the variable copied from
    std::optional<std::string> null_guard; // If: pointer tested `== NULL`; the else-branch may use it
};

struct CFunction {
    std::string name;   // BeePL name
    std::string c_name; // emitted name
    std::string signature;
    std::vector<std::string> decls; // hoisted locals
    std::vector<std::pair<std::string, SafeKind>> safe_params;
    CStmt body; // Block
    std::string text;
};

struct CUnit {
    std::string prelude;
    std::vector<std::string> globals;
    std::vector<CFunction> functions;
    std::string main_shim;
    std::string text;
};

struct CgenOptions {
    CMode mode = CMode::Host;
    // Host mode: entry point called by the generated main; defaults as for `run`.
    std::optional<std::string> entry;
    // Host mode: packet, uid and map contents the stubs serve.
    ExternalWorld world;
};

CUnit emit_program(const TypedProgram& tp, const CgenOptions& opts = {});

// Fragment lowering for a single expression, checked in ctx (free variables keep their names).
struct CFragment {
    std::vector<std::string> decls;
    std::vector<std::string> lines;
    std::string value; // C expression for the result, empty for unit
    CStmt tree;
    [[nodiscard]] std::string text() const;
};

CFragment lower_fragment(const TypingContext& ctx, const ExprPtr& e);
CFragment lower_ref(const TypingContext& ctx, const ExprPtr& e);
CFragment lower_for(const TypingContext& ctx, const ExprPtr& e);
CFragment lower_guarded_binop(const TypingContext& ctx, const ExprPtr& e);
CFragment lower_match_option(const TypingContext& ctx, const ExprPtr& e);
CFragment lower_match_bytes(const TypingContext& ctx, const ExprPtr& e);

// C spelling helpers.
std::string c_type(const Ty& t);
std::string c_prim(const PrimTy& p);
std::string c_literal(const PrimTy& p, int64_t v);

// Audits. Each returns human-readable violations; empty means clean.
std::vector<std::string> audit_dereferences(const CFunction& f);
std::vector<std::string> audit_dereferences(const CUnit& u);
std::vector<std::string> audit_guarded_ops(const std::string& c_text);
std::vector<std::string> audit_guarded_ops(const CUnit& u);

} // namespace beepl
