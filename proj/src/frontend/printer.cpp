// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "beepl/frontend.hpp"

namespace beepl {

namespace {

std::string literal_suffix(const PrimTy& p) {
    if (p.kind == PrimTy::Kind::Long) return p.is_signed() ? "L" : "UL";
    switch (p.bits) {
    case 8: return p.is_signed() ? "i8" : "u8";
    case 16: return p.is_signed() ? "i16" : "u16";
    default: return p.is_signed() ? "i32" : "u";
    }
}

std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': r += "\\n"; break;
        case '\t': r += "\\t"; break;
        case '\0': r += "\\0"; break;
        case '\\': r += "\\\\"; break;
        case '"': r += "\\\""; break;
        default: r += c;
        }
    }
    return r + "\"";
}

class Printer {
  public:
    explicit Printer(bool allow_internal) : internal_(allow_internal) {}

    std::string print(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Var: return e.name;
        case ExprKind::ConstInt:
        case ExprKind::ConstLong: return literal(e);
        case ExprKind::ConstBool: return e.bval ? "true" : "false";
        case ExprKind::UnitLit: return "()";
        case ExprKind::App: {
            std::string s = print(*e.kids[0]) + "(";
            for (std::size_t i = 1; i < e.kids.size(); ++i) {
                if (i > 1) s += ", ";
                s += wrap(*e.kids[i]);
            }
            return s + ")";
        }
        case ExprKind::Prim: return prim(e);
        case ExprKind::Let: {
            std::string s = "let " + e.name;
            if (e.ty) s += " : " + print_type(*e.ty);
            return s + " = " + wrap(*e.kids[0]) + " in " + print(*e.kids[1]);
        }
        case ExprKind::Cond:
            return "if " + wrap(*e.kids[0]) + " then " + wrap(*e.kids[1]) + " else " + print(*e.kids[2]);
        case ExprKind::StructInit: {
            std::string s = e.name + " { ";
            for (std::size_t i = 0; i < e.kids.size(); ++i) {
                if (i) s += ", ";
                s += e.field_names[i] + " = " + wrap(*e.kids[i]);
            }
            return s + (e.kids.empty() ? "}" : " }");
        }
        case ExprKind::Field: return wrap(*e.kids[0]) + "." + e.name;
        case ExprKind::NoneLit: return e.ty ? "none[" + print_type(*e.ty) + "]" : "none";
        case ExprKind::SomeLit: return "some(" + print(*e.kids[0]) + ")";
        case ExprKind::Match: {
            std::string s = "match " + wrap(*e.kids[0]) + " with";
            for (const auto& a : e.arms) s += " | " + pattern(a.pat) + " => " + wrap(*a.body);
            return s;
        }
        case ExprKind::For:
            return "for (" + wrap(*e.kids[0]) + " ... " + wrap(*e.kids[1]) + ", " +
                   (e.dir == Dir::Up ? "Up" : "Down") + ") { " + print(*e.kids[2]) + " }";
        case ExprKind::Loc:
            need_internal();
            return "<loc " + std::to_string(e.block) + "," + std::to_string(e.ival) + ">";
        case ExprKind::BytesVal:
            need_internal();
            return "<bytes " + std::to_string(e.block) + "," + std::to_string(e.ival) + "," + std::to_string(e.len) +
                   ">";
        case ExprKind::StructVal:
            need_internal();
            return "<struct " + e.name + " " + std::to_string(e.block) + "," + std::to_string(e.ival) + ">";
        case ExprKind::Repeat:
            need_internal();
            return "<repeat " + std::to_string(e.ival) + " " + wrap(*e.kids[1]) + " ; " + wrap(*e.kids[0]) + ">";
        case ExprKind::Undef: need_internal(); return "<undef>";
        }
        return "?";
    }

  private:
    bool internal_;

    void need_internal() const {
        if (!internal_) throw CompileError("UnprintableInternalNode", "internal node has no surface syntax");
    }

    static bool atomic(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Var:
        case ExprKind::ConstBool:
        case ExprKind::UnitLit:
        case ExprKind::App:
        case ExprKind::StructInit:
        case ExprKind::Field:
        case ExprKind::NoneLit:
        case ExprKind::SomeLit:
        case ExprKind::Loc:
        case ExprKind::BytesVal:
        case ExprKind::StructVal:
        case ExprKind::Undef: return true;
        case ExprKind::ConstInt:
        case ExprKind::ConstLong: return e.ival >= 0 || (!e.lit_ty.is_signed());
        case ExprKind::Prim: return e.op == PrimOpKind::Ref;
        default: return false;
        }
    }

    std::string wrap(const Expr& e) {
        std::string s = print(e);
        return atomic(e) ? s : "(" + s + ")";
    }

    static std::string literal(const Expr& e) {
        const bool unsigned64 = e.lit_ty.kind == PrimTy::Kind::Long && !e.lit_ty.is_signed();
        std::string digits = unsigned64 ? std::to_string(static_cast<uint64_t>(e.ival)) : std::to_string(e.ival);
        const bool big = unsigned64 && static_cast<uint64_t>(e.ival) > static_cast<uint64_t>(INT64_MAX);
        const PrimTy dflt = default_literal_type(e.ival, big);
        if (e.lit_ty == dflt) return digits;
        return digits + literal_suffix(e.lit_ty);
    }

    std::string prim(const Expr& e) {
        switch (e.op) {
        case PrimOpKind::Deref: return "!" + wrap(*e.kids[0]);
        case PrimOpKind::Ref: return "ref(" + print(*e.kids[0]) + ")";
        case PrimOpKind::Assign: return wrap(*e.kids[0]) + " := " + wrap(*e.kids[1]);
        case PrimOpKind::Uop:
            switch (e.uop.kind) {
            case UnOpKind::Neg: return "-" + wrap_neg(*e.kids[0]);
            case UnOpKind::LogNot: return "not " + wrap(*e.kids[0]);
            case UnOpKind::BitNot: return "~" + wrap(*e.kids[0]);
            case UnOpKind::Cast: return "(" + to_string(e.uop.target) + ")" + wrap(*e.kids[0]);
            }
            break;
        case PrimOpKind::Bop: return wrap(*e.kids[0]) + " " + to_string(e.bop) + " " + wrap(*e.kids[1]);
        }
        return "?";
    }

    // `-5` would re-parse as a folded literal, so a negated literal keeps its parentheses.
    std::string wrap_neg(const Expr& e) {
        if (e.kind == ExprKind::ConstInt || e.kind == ExprKind::ConstLong) return "(" + print(e) + ")";
        return wrap(e);
    }

    static std::string pattern(const Pattern& p) {
        switch (p.kind) {
        case Pattern::Kind::None: return "pnone";
        case Pattern::Kind::Some: return "psome " + p.binder;
        case Pattern::Kind::Wild: return "_";
        case Pattern::Kind::Bytes: {
            std::string s = p.binder + ", " + print_type(p.target);
            for (std::size_t i = 0; i < p.fields.size(); ++i)
                s += (i ? ", (" : " : (") + p.fields[i].name + ", " + print_type(p.fields[i].ty) + ")";
            return s;
        }
        }
        return "?";
    }
};

} // namespace

std::string print_type(const Ty& t) {
    switch (t.kind()) {
    case Ty::Kind::Prim: return to_string(t.prim());
    case Ty::Kind::Ref: return print_type(t.inner()) + "*";
    case Ty::Kind::Option: return "option(" + print_type(t.inner()) + ")";
    case Ty::Kind::Struct: return "struct " + t.struct_id();
    case Ty::Kind::Bytes: return "bytes";
    case Ty::Kind::Unit: return "unit";
    default: return to_string(t);
    }
}

std::string print_expr(const Expr& e) { return Printer(false).print(e); }
std::string print_expr(const ExprPtr& e) { return print_expr(*e); }
std::string debug_print(const Expr& e) { return Printer(true).print(e); }

std::string print_program(const Program& p) {
    std::ostringstream out;
    for (const auto& c : p.composites) {
        out << "struct " << c.id << " {\n";
        for (const auto& f : c.fields) {
            if (f.ty.is(Ty::Kind::Array))
                out << "    " << to_string(f.ty.elem()) << " " << f.name << "[" << f.ty.len() << "];\n";
            else
                out << "    " << print_type(f.ty) << " " << f.name << ";\n";
        }
        out << "};\n";
    }
    for (const auto& d : p.decls) {
        if (const auto* f = std::get_if<FunDecl>(&d)) {
            if (f->sec) out << "#section " << quote(*f->sec) << "\n";
            out << "fun " << f->name << "(";
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) out << ", ";
                out << print_type(f->args[i].second) << " " << f->args[i].first;
            }
            out << ") : " << print_type(f->rt);
            if (f->ef) out << ", " << to_string(*f->ef);
            out << " {\n    " << print_expr(*f->body) << "\n}\n";
        } else if (const auto* x = std::get_if<ExtDecl>(&d)) {
            out << "extern fun " << x->name << "(";
            for (std::size_t i = 0; i < x->args.size(); ++i) {
                if (i) out << ", ";
                out << print_type(x->args[i]);
            }
            out << ") : " << print_type(x->ret) << ", " << to_string(x->ef) << ";\n";
        } else if (const auto* g = std::get_if<GlobDecl>(&d)) {
            if (g->is_map) {
                out << "struct { ... } " << g->name;
            } else if (g->ty.is(Ty::Kind::Array)) {
                out << to_string(g->ty.elem()) << " " << g->name << "[" << g->ty.len() << "]";
            } else {
                out << print_type(g->ty) << " " << g->name;
            }
            if (g->sec) out << " #section " << quote(*g->sec);
            if (const auto* s = std::get_if<std::string>(&g->init)) out << " = " << quote(*s);
            if (const auto* i = std::get_if<int64_t>(&g->init)) out << " = " << *i;
            if (const auto* b = std::get_if<bool>(&g->init)) out << " = " << (*b ? "true" : "false");
            out << ";\n";
        }
    }
    return out.str();
}

} // namespace beepl
