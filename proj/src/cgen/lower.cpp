// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "internal.hpp"

namespace beepl::cgen_detail {

namespace {

const Ty& annot(const Expr& e) {
    if (!e.annot) throw std::logic_error("lowering needs an elaborated expression");
    return *e.annot;
}

std::string c_op(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::And: return "&";
    case BinOp::Or: return "|";
    case BinOp::Xor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::LAnd: return "&&";
    case BinOp::LOr: return "||";
    }
    return "?";
}

std::string zero_init(const Ty& t) {
    if (t.is(Ty::Kind::Bytes)) return " = {NULL, NULL}";
    if (t.is_prim()) return " = 0";
    return " = NULL";
}

} // namespace

Lowerer::Lowerer(const CompositeEnv& pi, const UnitNames& names) : pi_(pi), names_(names), out_(&root.body) {
    root.kind = CStmt::Kind::Block;
}

std::string Lowerer::bind_local(const std::string& x) {
    std::string c;
    if (plain_identifier(x) && x.rfind("__bpl_", 0) != 0 && !reserved_c_names().count(x) && !names_.taken.count(x) &&
        !local_taken_.count(x)) {
        c = x;
    } else {
        do {
            c = "__bpl_" + sanitize(x) + "_" + std::to_string(counters_["v:" + x]++);
        } while (local_taken_.count(c));
    }
    local_taken_.insert(c);
    return c;
}

std::string Lowerer::lookup(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
        if (it->first == x) return it->second;
    if (auto g = names_.globals.find(x); g != names_.globals.end()) return g->second;
    return x;
}

std::string Lowerer::declare(const std::string& c_name, const Ty& t) {
    if (!t.is(Ty::Kind::Unit)) decls.push_back(c_type(t) + (c_type(t).back() == '*' ? "" : " ") + c_name + zero_init(t) + ";");
    return c_name;
}

std::string Lowerer::temp(const Ty& t, const std::string& prefix) {
    return declare("__bpl_" + prefix + std::to_string(counters_[prefix]++), t);
}

std::string Lowerer::bind_param(const std::string& x, const Ty& t) {
    if (t.is(Ty::Kind::Unit)) {
        scope_.emplace_back(x, "");
        return "";
    }
    const std::string c = bind_local(x);
    scope_.emplace_back(x, c);
    return c;
}

void Lowerer::bind_free(const std::string& x, const Ty& t) {
    local_taken_.insert(x);
    scope_.emplace_back(x, t.is(Ty::Kind::Unit) ? "" : x);
}

CStmt& Lowerer::emit(std::string text, std::vector<std::string> derefs) {
    CStmt s;
    s.kind = CStmt::Kind::Line;
    s.text = std::move(text);
    s.derefs = std::move(derefs);
    out_->push_back(std::move(s));
    return out_->back();
}

CStmt& Lowerer::define(std::string text, const std::string& var, SafeKind k, std::optional<std::string> src) {
    CStmt& s = emit(std::move(text));
    s.defines = var;
    s.safe_kind = k;
    s.source = std::move(src);
    return s;
}

void Lowerer::lower_return(const ExprPtr& e) { into(e, {Dest::Kind::Return, {}}); }

std::string Lowerer::lower_value(const ExprPtr& e) { return atom(e); }

// ---------------------------------------------------------------- values

std::string Lowerer::atom(const ExprPtr& ep) {
    const Expr& e = *ep;
    switch (e.kind) {
    case ExprKind::Var: return lookup(e.name);
    case ExprKind::ConstInt:
    case ExprKind::ConstLong: return c_literal(e.lit_ty, e.ival);
    case ExprKind::ConstBool: return e.bval ? "1" : "0";
    case ExprKind::UnitLit: return "";
    case ExprKind::NoneLit: return "NULL";
    case ExprKind::SomeLit: return atom(e.kids[0]);
    case ExprKind::StructInit: return struct_init(e);
    case ExprKind::Prim:
        if (e.op == PrimOpKind::Ref) return ref_cell(e);
        if (e.op == PrimOpKind::Deref && annot(e).is(Ty::Kind::Struct)) {
            const std::string p = atom(e.kids[0]);
            return struct_copy(p, annot(e).struct_id());
        }
        break;
    default: break;
    }
    if (is_internal(e)) throw std::logic_error("internal node reached code generation");
    const Ty& t = annot(e);
    if (t.is(Ty::Kind::Unit)) {
        into(ep, {Dest::Kind::Discard, {}});
        return "";
    }
    const std::string v = temp(t);
    into(ep, {Dest::Kind::Assign, v});
    return v;
}

void Lowerer::finish(const Dest& d, const std::string& rvalue, std::vector<std::string> derefs) {
    switch (d.kind) {
    case Dest::Kind::Return: emit("return " + rvalue + ";", std::move(derefs)); break;
    case Dest::Kind::Assign: {
        if (d.var.empty()) break;
        const std::string text = d.var + " = " + rvalue + ";";
        if (rvalue.rfind('&', 0) == 0) define(text, d.var, SafeKind::AddrOfLocal);
        else if (plain_identifier(rvalue)) define(text, d.var, SafeKind::Copy, rvalue);
        else emit(text, std::move(derefs));
        break;
    }
    case Dest::Kind::Discard: break;
    }
}

void Lowerer::finish_unit(const Dest& d) {
    if (d.kind == Dest::Kind::Return) emit("return;");
}

void Lowerer::into(const ExprPtr& ep, const Dest& d) {
    const Expr& e = *ep;
    const bool unit = e.annot && e.annot->is(Ty::Kind::Unit);
    const Dest dd = (unit && d.kind == Dest::Kind::Assign) ? Dest{Dest::Kind::Discard, {}} : d;
    switch (e.kind) {
    case ExprKind::Let: lower_let(e, dd); return;
    case ExprKind::Cond: lower_cond(e, dd); return;
    case ExprKind::Match: lower_match(e, dd); return;
    case ExprKind::For:
        lower_for(e);
        finish_unit(dd);
        return;
    case ExprKind::App: {
        const std::string call = rvalue_call(e);
        if (unit || dd.kind == Dest::Kind::Discard) {
            emit(call + ";");
            finish_unit(dd);
        } else {
            finish(dd, call);
        }
        return;
    }
    case ExprKind::Field: {
        const std::string p = atom(e.kids[0]);
        if (auto obj = addressed_object(p)) finish(dd, *obj + "." + e.name);
        else finish(dd, p + "->" + e.name, {p});
        return;
    }
    case ExprKind::Prim: {
        if (e.op == PrimOpKind::Assign) {
            const std::string p = atom(e.kids[0]);
            const std::string v = atom(e.kids[1]);
            const auto obj = addressed_object(p);
            const std::string lhs = obj ? *obj : "*" + p;
            std::vector<std::string> derefs;
            if (!obj) derefs.push_back(p);
            if (annot(*e.kids[1]).is(Ty::Kind::Struct)) {
                const auto src = addressed_object(v);
                if (!src) derefs.push_back(v);
                emit(lhs + " = " + (src ? *src : "*" + v) + ";", std::move(derefs));
            } else {
                emit(lhs + " = " + v + ";", std::move(derefs));
            }
            finish_unit(dd);
            return;
        }
        if (e.op == PrimOpKind::Ref || (e.op == PrimOpKind::Deref && annot(e).is(Ty::Kind::Struct))) break;
        std::vector<std::string> derefs;
        const std::string r = rvalue_prim(e, derefs);
        finish(dd, r, std::move(derefs));
        return;
    }
    default: break;
    }
    const std::string a = atom(ep);
    if (unit) finish_unit(dd);
    else finish(dd, a);
}

// ---------------------------------------------------------------- operators

std::string Lowerer::guarded_bop(BinOp op, const PrimTy& t, const std::string& a, const std::string& b) const {
    const std::string T = c_prim(t);
    const std::string W = t.is_bool() ? "uint32_t" : wide_unsigned(t);
    const std::string o = c_op(op);
    switch (op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul: return "(" + T + ")((" + W + ")" + a + " " + o + " (" + W + ")" + b + ")";
    case BinOp::And:
    case BinOp::Or:
    case BinOp::Xor: return "(" + T + ")(" + a + " " + o + " " + b + ")";
    case BinOp::Div:
    case BinOp::Mod:
        if (t.is_signed())
            return "(" + b + " == 0 ? 0 : ((" + a + " == " + c_literal(t, t.min_value()) + " && " + b +
                   " == " + c_literal(t, -1) + ") ? 0 : (" + T + ")(" + a + " " + o + " " + b + ")))";
        return "(" + b + " == 0 ? 0 : (" + T + ")(" + a + " " + o + " " + b + "))";
    case BinOp::Shl:
        return "((uint64_t)" + b + " >= " + std::to_string(t.bits) + " ? 0 : (" + T + ")((" + W + ")" + a + " << " +
               b + "))";
    case BinOp::Shr:
        return "((uint64_t)" + b + " >= " + std::to_string(t.bits) + " ? 0 : (" + T + ")(" + a + " >> " + b + "))";
    default: return "(" + a + " " + o + " " + b + ")";
    }
}

std::string Lowerer::rvalue_prim(const Expr& e, std::vector<std::string>& derefs) {
    switch (e.op) {
    case PrimOpKind::Deref: {
        const std::string p = atom(e.kids[0]);
        if (auto obj = addressed_object(p)) return *obj;
        derefs.push_back(p);
        return "*" + p;
    }
    case PrimOpKind::Uop: {
        const std::string a = atom(e.kids[0]);
        const Ty& at = annot(*e.kids[0]);
        switch (e.uop.kind) {
        case UnOpKind::LogNot: return "!" + a;
        case UnOpKind::Cast: return "(" + c_prim(e.uop.target) + ")" + a;
        case UnOpKind::Neg:
            return "(" + c_prim(at.prim()) + ")(0 - (" + wide_unsigned(at.prim()) + ")" + a + ")";
        case UnOpKind::BitNot:
            return "(" + c_prim(at.prim()) + ")(~(" + wide_unsigned(at.prim()) + ")" + a + ")";
        }
        break;
    }
    case PrimOpKind::Bop: {
        const std::string a = atom(e.kids[0]);
        const std::string b = atom(e.kids[1]);
        return guarded_bop(e.bop, annot(*e.kids[0]).prim(), a, b);
    }
    default: break;
    }
    throw std::logic_error("primitive has no rvalue form");
}

std::string Lowerer::rvalue_call(const Expr& e) {
    const std::string& f = e.kids[0]->name;
    std::vector<std::string> args;
    for (std::size_t i = 1; i < e.kids.size(); ++i) {
        std::string a = atom(e.kids[i]);
        if (!annot(*e.kids[i]).is(Ty::Kind::Unit)) args.push_back(std::move(a));
    }
    std::string callee = f;
    if (auto it = names_.funs.find(f); it != names_.funs.end()) callee = it->second;
    else if (auto x = names_.externals.find(f); x != names_.externals.end()) callee = x->second;
    std::string s = callee + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i];
    return s + ")";
}

// ---------------------------------------------------------------- storage

std::string Lowerer::ref_cell(const Expr& e) {
    const Ty& ct = annot(*e.kids[0]);
    const std::string v = atom(e.kids[0]);
    if (ct.is(Ty::Kind::Struct)) return struct_copy(v, ct.struct_id());
    const std::string r = "__bpl_r" + std::to_string(counters_["r"]++);
    decls.push_back(c_type(ct) + " " + r + ";");
    emit(r + " = " + v + ";");
    return "&" + r;
}

std::string Lowerer::struct_copy(const std::string& src, const std::string& id) {
    const std::string s = "__bpl_s" + std::to_string(counters_["s"]++);
    decls.push_back("struct " + id + " " + s + ";");
    if (auto obj = addressed_object(src)) emit(s + " = " + *obj + ";");
    else emit(s + " = *" + src + ";", {src});
    return "&" + s;
}

std::string Lowerer::struct_init(const Expr& e) {
    const std::string s = "__bpl_s" + std::to_string(counters_["s"]++);
    decls.push_back("struct " + e.name + " " + s + ";");
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
        const std::string v = atom(e.kids[i]);
        emit(s + "." + e.field_names[i] + " = " + v + ";");
    }
    return "&" + s;
}

// ---------------------------------------------------------------- control

void Lowerer::lower_let(const Expr& e, const Dest& d) {
    const Ty& bt = e.ty ? *e.ty : annot(*e.kids[0]);
    if (e.name == "_" || bt.is(Ty::Kind::Unit)) {
        into(e.kids[0], {Dest::Kind::Discard, {}});
        if (e.name != "_") scope_.emplace_back(e.name, "");
    } else {
        const std::string c = bind_local(e.name);
        declare(c, bt);
        into(e.kids[0], {Dest::Kind::Assign, c});
        scope_.emplace_back(e.name, c);
    }
    into(e.kids[1], d);
    if (e.name != "_") scope_.pop_back();
}

void Lowerer::lower_cond(const Expr& e, const Dest& d) {
    const std::string g = atom(e.kids[0]);
    CStmt node;
    node.kind = CStmt::Kind::If;
    node.text = g;
    out_->push_back(std::move(node));
    CStmt& n = out_->back();
    std::vector<CStmt>* saved = out_;
    out_ = &n.body;
    into(e.kids[1], d);
    out_ = &n.orelse;
    into(e.kids[2], d);
    out_ = saved;
}

void Lowerer::lower_match(const Expr& e, const Dest& d) {
    const Ty& st = annot(*e.kids[0]);
    std::vector<CStmt>* saved = out_;
    if (st.is(Ty::Kind::Option)) {
        const std::string a = atom(e.kids[0]);
        const Arm* none_arm = nullptr;
        const Arm* some_arm = nullptr;
        for (const auto& arm : e.arms) {
            const auto k = arm.pat.kind;
            if (!none_arm && (k == Pattern::Kind::None || k == Pattern::Kind::Wild)) none_arm = &arm;
            if (!some_arm && (k == Pattern::Kind::Some || k == Pattern::Kind::Wild)) some_arm = &arm;
        }
        CStmt node;
        node.kind = CStmt::Kind::If;
        node.text = a + " == NULL";
        if (plain_identifier(a)) node.null_guard = a;
        out_->push_back(std::move(node));
        CStmt& n = out_->back();
        out_ = &n.body;
        if (none_arm) into(none_arm->body, d);
        out_ = &n.orelse;
        if (some_arm) {
            const bool binds = some_arm->pat.kind == Pattern::Kind::Some;
            if (binds) {
                const std::string c = bind_local(some_arm->pat.binder);
                declare(c, st.inner());
                define(c + " = " + a + ";", c, SafeKind::OptionGuardedCopy, a);
                scope_.emplace_back(some_arm->pat.binder, c);
            }
            into(some_arm->body, d);
            if (binds) scope_.pop_back();
        }
        out_ = saved;
        return;
    }

    // Bytes: [extraction arm, '_' arm].
    std::string b = atom(e.kids[0]);
    if (b.rfind("__bpl_", 0) != 0) {
        const std::string copy = temp(Ty::bytes(), "b");
        emit(copy + " = " + b + ";");
        b = copy;
    }
    const Arm& ex = e.arms[0];
    const Arm& fallback = e.arms[1];
    const Ty& target = ex.pat.target;
    const std::string size =
        target.is(Ty::Kind::Struct) ? "sizeof(struct " + target.struct_id() + ")" : "sizeof(" + c_prim(target.prim()) + ")";
    CStmt node;
    node.kind = CStmt::Kind::If;
    node.text = b + ".start + " + size + " > " + b + ".end";
    out_->push_back(std::move(node));
    CStmt& n = out_->back();
    out_ = &n.body;
    into(fallback.body, d);
    out_ = &n.orelse;
    const std::size_t mark = scope_.size();
    const bool named = ex.pat.binder != "_";
    if (target.is(Ty::Kind::Struct)) {
        const std::string x = named ? bind_local(ex.pat.binder) : "__bpl_x" + std::to_string(counters_["x"]++);
        declare(x, target);
        define(x + " = (struct " + target.struct_id() + " *)" + b + ".start;", x, SafeKind::BoundsCast);
        if (named) scope_.emplace_back(ex.pat.binder, x);
        for (const auto& f : ex.pat.fields) {
            const std::string fc = bind_local(f.name);
            declare(fc, f.ty);
            emit(fc + " = " + x + "->" + f.name + ";", {x});
            scope_.emplace_back(f.name, fc);
        }
    } else if (named) {
        const std::string x = bind_local(ex.pat.binder);
        declare(x, target);
        emit("__builtin_memcpy(&" + x + ", " + b + ".start, " + size + ");");
        scope_.emplace_back(ex.pat.binder, x);
    }
    into(ex.body, d);
    scope_.resize(mark);
    out_ = saved;
}

void Lowerer::lower_for(const Expr& e) {
    const std::string lo = atom(e.kids[0]);
    const std::string hi = atom(e.kids[1]);
    const PrimTy t = annot(*e.kids[0]).prim();
    const bool up = e.dir == Dir::Up;
    std::vector<CStmt>* saved = out_;
    if (t.bits <= 32) {
        const std::string i = temp(Ty::int64(), "i");
        CStmt node;
        node.kind = CStmt::Kind::For;
        node.text = "for (" + i + " = " + lo + "; " + i + (up ? " <= " : " >= ") + hi + "; " + i + (up ? "++" : "--") + ")";
        out_->push_back(std::move(node));
        out_ = &out_->back().body;
        into(e.kids[2], {Dest::Kind::Discard, {}});
        out_ = saved;
        return;
    }
    // 64-bit bounds: the index cannot step past hi, so the exit test follows the body.
    const std::string i = temp(Ty::prim(t), "i");
    CStmt guard;
    guard.kind = CStmt::Kind::If;
    guard.text = lo + (up ? " <= " : " >= ") + hi;
    out_->push_back(std::move(guard));
    CStmt& g = out_->back();
    CStmt loop;
    loop.kind = CStmt::Kind::For;
    loop.text = "for (" + i + " = " + lo + "; ; " + i + (up ? "++" : "--") + ")";
    g.body.push_back(std::move(loop));
    out_ = &g.body.back().body;
    into(e.kids[2], {Dest::Kind::Discard, {}});
    emit("if (" + i + " == " + hi + ") break;");
    out_ = saved;
}

// ---------------------------------------------------------------- rendering

std::string render(const CStmt& s, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    auto lines = [&](const std::vector<CStmt>& v, int ind) {
        std::string out;
        for (const auto& c : v) out += render(c, ind);
        return out;
    };
    switch (s.kind) {
    case CStmt::Kind::Block: return lines(s.body, indent);
    case CStmt::Kind::Line: return pad + s.text + "\n";
    case CStmt::Kind::For: return pad + s.text + " {\n" + lines(s.body, indent + 1) + pad + "}\n";
    case CStmt::Kind::If: {
        std::string out = pad + "if (" + s.text + ") {\n" + lines(s.body, indent + 1) + pad + "}";
        if (!s.orelse.empty()) out += " else {\n" + lines(s.orelse, indent + 1) + pad + "}";
        return out + "\n";
    }
    }
    return {};
}

} // namespace beepl::cgen_detail
