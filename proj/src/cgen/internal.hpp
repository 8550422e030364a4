// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "beepl/cgen.hpp"

namespace beepl::cgen_detail {

std::string wide_unsigned(const PrimTy& p);
const std::set<std::string>& reserved_c_names();
bool plain_identifier(const std::string& x);
// `&x` gives x.
std::optional<std::string> addressed_object(const std::string& p);
std::string sanitize(const std::string& x);

// Names visible to every function of a unit.
struct UnitNames {
    std::set<std::string> taken;                  // global C identifiers
    std::map<std::string, std::string> funs;      // BeePL function -> C name
    std::map<std::string, std::string> globals;   // BeePL global -> C name
    std::set<std::string> safe_globals;           // map pointers, always valid
    std::map<std::string, std::string> externals; // helper or extern -> C name
};

// Lowers one function body (or one fragment) into hoisted declarations plus a statement tree.
class Lowerer {
  public:
    Lowerer(const CompositeEnv& pi, const UnitNames& names);

    // Declares a parameter; returns "" for unit parameters, which are dropped.
    std::string bind_param(const std::string& x, const Ty& t);
    // Binds a free variable of a fragment to its own name.
    void bind_free(const std::string& x, const Ty& t);

    // Lowers e in tail position.
    void lower_return(const ExprPtr& e);
    // Lowers e, returning a C expression for its value ("" for unit).
    std::string lower_value(const ExprPtr& e);

    std::vector<std::string> decls;
    CStmt root;

  private:
    struct Dest {
        enum class Kind { Return, Assign, Discard };
        Kind kind = Kind::Discard;
        std::string var;
    };

    std::string atom(const ExprPtr& e);
    void into(const ExprPtr& e, const Dest& d);
    void finish(const Dest& d, const std::string& rvalue, std::vector<std::string> derefs = {});
    void finish_unit(const Dest& d);

    std::string rvalue_prim(const Expr& e, std::vector<std::string>& derefs);
    std::string rvalue_call(const Expr& e);
    std::string guarded_bop(BinOp op, const PrimTy& t, const std::string& a, const std::string& b) const;

    void lower_let(const Expr& e, const Dest& d);
    void lower_cond(const Expr& e, const Dest& d);
    void lower_match(const Expr& e, const Dest& d);
    void lower_for(const Expr& e);

    std::string ref_cell(const Expr& e);
    std::string struct_init(const Expr& e);
    std::string struct_copy(const std::string& src, const std::string& id);

    std::string temp(const Ty& t, const std::string& prefix = "t");
    std::string declare(const std::string& c_name, const Ty& t);
    std::string bind_local(const std::string& x);
    std::string lookup(const std::string& x) const;

    CStmt& emit(std::string text, std::vector<std::string> derefs = {});
    CStmt& define(std::string text, const std::string& var, SafeKind k, std::optional<std::string> src = {});

    const CompositeEnv& pi_;
    const UnitNames& names_;
    std::set<std::string> local_taken_;
    std::vector<std::pair<std::string, std::string>> scope_; // BeePL name -> C name ("" for unit)
    std::map<std::string, int> counters_;
    std::vector<CStmt>* out_;
};

std::string render(const CStmt& s, int indent);

} // namespace beepl::cgen_detail
