// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <stdexcept>

#include "internal.hpp"

namespace beepl {

using namespace cgen_detail;

namespace {

std::string sec_attr(const std::optional<std::string>& sec) { return sec ? " SEC(\"" + *sec + "\")" : ""; }

std::string hex_byte(uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02x", b);
    return buf;
}

std::string struct_def(const Composite& c) {
    std::string s = "struct " + c.id + " {\n";
    for (const auto& f : c.fields) {
        if (f.ty.is(Ty::Kind::Array))
            s += "    " + c_prim(f.ty.elem()) + " " + f.name + "[" + std::to_string(f.ty.len()) + "];\n";
        else
            s += "    " + c_type(f.ty) + (c_type(f.ty).back() == '*' ? "" : " ") + f.name + ";\n";
    }
    return s + "};\n";
}

std::string prelude(CMode mode, const CompositeEnv& pi) {
    std::string p;
    if (mode == CMode::Host) {
        p = "#include <stdint.h>\n#include <stddef.h>\n\nint printf(const char *fmt, ...);\n#define SEC(name)\n";
    } else {
        for (const char* w : {"8", "16", "32", "64"})
            p += std::string("typedef __INT") + w + "_TYPE__ int" + w + "_t;\ntypedef __UINT" + w + "_TYPE__ uint" + w +
                 "_t;\n";
        p += "typedef __SIZE_TYPE__ size_t;\n#define NULL ((void *)0)\n";
        p += "#define SEC(name) __attribute__((section(name), used))\n";
    }
    p += "\ntypedef struct {\n    unsigned char *start;\n    unsigned char *end;\n} bytes_t;\n\n";
    for (const auto& [id, c] : pi) p += struct_def(c) + "\n";
    p += "static inline __attribute__((unused)) uint16_t __bpl_htons(uint16_t x) { return (uint16_t)((uint16_t)(x >> 8) | (uint16_t)(x << 8)); }\n";
    return p;
}

std::string helper_stubs(CMode mode, const TypedProgram& tp, const ExternalWorld& w) {
    if (mode == CMode::Ebpf) {
        return "static void *(*bpf_map_lookup_elem)(void *map, const void *key) __attribute__((unused)) = (void *)1;\n"
               "static uint64_t (*bpf_get_current_uid_gid)(void) __attribute__((unused)) = (void *)15;\n";
    }
    char uid[40];
    std::snprintf(uid, sizeof uid, "0x%016llxULL", static_cast<unsigned long long>(w.uid_gid));
    std::string s = "static uint64_t __bpl_uid_gid = " + std::string(uid) + ";\n";
    s += "static inline int64_t bpf_get_current_uid_gid(void) { return (int64_t)__bpl_uid_gid; }\n\n";
    s += "struct __bpl_map_entry {\n    uint32_t map;\n    uint64_t key;\n    int64_t value;\n};\n";
    s += "static struct __bpl_map_entry __bpl_map_entries[] = {\n";
    uint32_t index = 0;
    std::size_t count = 0;
    for (const auto& d : tp.program.decls) {
        const auto* g = std::get_if<GlobDecl>(&d);
        if (!g || !g->is_map) continue;
        if (auto m = w.maps.find(g->name); m != w.maps.end()) {
            for (const auto& [k, v] : m->second) {
                s += "    {" + std::to_string(index) + "U, " + std::to_string(k) + "ULL, " +
                     c_literal(PrimTy::int64(), v) + "},\n";
                ++count;
            }
        }
        ++index;
    }
    s += "    {0xffffffffU, 0ULL, 0LL},\n};\n";
    s += "static const size_t __bpl_map_entry_count = " + std::to_string(count) + ";\n";
    s += "static inline int64_t *bpf_map_lookup_elem(struct bpf_map *map, int64_t *key) {\n"
         "    if (map == NULL || key == NULL) return NULL;\n"
         "    for (size_t i = 0; i < __bpl_map_entry_count; i++)\n"
         "        if (__bpl_map_entries[i].map == map->id && __bpl_map_entries[i].key == (uint64_t)*key)\n"
         "            return &__bpl_map_entries[i].value;\n"
         "    return NULL;\n"
         "}\n";
    return s;
}

std::string mangle_global(const std::string& x, const char* prefix) {
    if (plain_identifier(x) && !reserved_c_names().count(x)) return x;
    return std::string("__bpl_") + prefix + sanitize(x);
}

UnitNames unit_names(const TypedProgram& tp) {
    UnitNames n;
    for (const auto& d : tp.program.decls) {
        if (const auto* f = std::get_if<FunDecl>(&d)) n.funs[f->name] = mangle_global(f->name, "fn_");
        else if (const auto* g = std::get_if<GlobDecl>(&d)) n.globals[g->name] = mangle_global(g->name, "g_");
        else if (const auto* x = std::get_if<ExtDecl>(&d)) n.externals[x->name] = mangle_global(x->name, "ext_");
        if (const auto* g = std::get_if<GlobDecl>(&d); g && g->is_map) n.safe_globals.insert(n.globals[g->name]);
    }
    for (const auto& [name, sig] : tp.ctx.psi) {
        if (n.externals.count(name)) continue;
        n.externals[name] = name == "htons" ? "__bpl_htons" : name;
    }
    for (const auto& m : {n.funs, n.globals, n.externals})
        for (const auto& [k, v] : m) n.taken.insert(v);
    for (const auto& [id, c] : tp.ctx.pi) n.taken.insert(id);
    return n;
}

std::string param_list(const std::vector<std::string>& ps) {
    if (ps.empty()) return "void";
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ps[i];
    return s;
}

std::string typed_name(const Ty& t, const std::string& name) {
    const std::string ct = c_type(t);
    return ct + (ct.back() == '*' ? "" : " ") + name;
}

CFunction lower_function(const TypedFunDecl& tf, const TypedProgram& tp, const UnitNames& names, CMode mode) {
    const FunDecl& fd = tf.decl;
    Lowerer low(tp.ctx.pi, names);
    CFunction f;
    f.name = fd.name;
    f.c_name = names.funs.at(fd.name);
    std::vector<std::string> params;
    for (const auto& [x, t] : fd.args) {
        const std::string c = low.bind_param(x, t);
        if (c.empty()) continue;
        params.push_back(typed_name(t, c));
        if (t.is(Ty::Kind::Ref) || t.is(Ty::Kind::Struct)) f.safe_params.emplace_back(c, SafeKind::RefParam);
    }
    for (const auto& g : names.safe_globals) f.safe_params.emplace_back(g, SafeKind::AddrOfLocal);
    low.lower_return(fd.body);
    std::string head;
    if (mode == CMode::Ebpf) head = fd.sec ? "SEC(\"" + *fd.sec + "\") " : "static __attribute__((unused)) ";
    f.signature = head + (fd.rt.is(Ty::Kind::Unit) ? "void" : c_type(fd.rt)) + " " + f.c_name + "(" + param_list(params) + ")";
    f.decls = low.decls;
    f.body = std::move(low.root);
    std::string text = f.signature + " {\n";
    for (const auto& d : f.decls) text += "    " + d + "\n";
    text += render(f.body, 1);
    f.text = text + "}\n";
    return f;
}

std::string global_def(const GlobDecl& g, const UnitNames& names, uint32_t map_index) {
    const std::string c = names.globals.at(g.name);
    if (g.is_map)
        return "struct bpf_map __bpl_map_" + c + sec_attr(g.sec ? g.sec : std::optional<std::string>(".maps")) +
               " = {" + std::to_string(map_index) + "U};\nstatic struct bpf_map *const " + c + " = &__bpl_map_" + c +
               ";\n";
    if (g.ty.is(Ty::Kind::Array)) {
        const PrimTy el = g.ty.elem();
        const bool chars = el.bits == 8 && el.is_signed();
        std::string s = (chars ? std::string("char") : c_prim(el)) + " " + c + "[" + std::to_string(g.ty.len()) + "]" +
                        sec_attr(g.sec);
        if (const auto* str = std::get_if<std::string>(&g.init)) {
            std::string lit = "\"";
            for (char ch : *str) {
                if (ch == '"' || ch == '\\') lit += '\\';
                lit += ch;
            }
            s += " = " + lit + "\"";
        }
        return s + ";\n";
    }
    int64_t init = 0;
    if (const auto* i = std::get_if<int64_t>(&g.init)) init = *i;
    if (const auto* b = std::get_if<bool>(&g.init)) init = *b ? 1 : 0;
    return c_prim(g.ty.prim()) + " " + c + sec_attr(g.sec) + " = " + c_literal(g.ty.prim(), init) + ";\n";
}

std::string extern_decl(const ExtDecl& x, const UnitNames& names) {
    std::vector<std::string> ps;
    for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!x.args[i].is(Ty::Kind::Unit)) ps.push_back(typed_name(x.args[i], "a" + std::to_string(i)));
    return "extern " + (x.ret.is(Ty::Kind::Unit) ? std::string("void") : c_type(x.ret)) + " " +
           names.externals.at(x.name) + "(" + param_list(ps) + ");\n";
}

std::string main_shim(const TypedProgram& tp, const UnitNames& names, const std::string& entry,
                      const ExternalWorld& w) {
    const FunDecl& fd = tp.funs.at(entry).decl;
    std::string s = "int main(void) {\n";
    const std::size_t n = w.packet.size();
    s += "    static unsigned char __bpl_packet[" + std::to_string(n ? n : 1) + "] __attribute__((aligned(8))) = {";
    for (std::size_t i = 0; i < n; ++i) s += (i ? ", " : "") + hex_byte(w.packet[i]);
    if (!n) s += "0";
    s += "};\n";
    s += "    bytes_t __bpl_region = {__bpl_packet, __bpl_packet + " + std::to_string(n) + "};\n";
    s += "    (void)__bpl_region;\n";
    std::vector<std::string> args;
    int k = 0;
    for (const auto& [x, t] : fd.args) {
        (void)x;
        const std::string v = "__bpl_arg" + std::to_string(k++);
        if (t.is(Ty::Kind::Unit)) continue;
        const bool ctx_ptr = t.is(Ty::Kind::Option) && t.inner().inner().is(Ty::Kind::Struct) &&
                             (t.inner().inner().struct_id() == "xdp_md" ||
                              t.inner().inner().struct_id() == "__sk_buff");
        if (ctx_ptr) {
            s += "    struct " + t.inner().inner().struct_id() + " " + v + ";\n";
            s += "    " + v + ".data = __bpl_region;\n";
            args.push_back("&" + v);
        } else if (t.is(Ty::Kind::Bytes)) {
            args.push_back("__bpl_region");
        } else if (t.is(Ty::Kind::Option)) {
            args.push_back("NULL");
        } else if (t.is(Ty::Kind::Ref) || t.is(Ty::Kind::Struct)) {
            const Ty& in = t.is(Ty::Kind::Ref) ? t.inner() : t;
            if (in.is(Ty::Kind::Struct)) s += "    struct " + in.struct_id() + " " + v + " = {0};\n";
            else s += "    " + c_type(in) + " " + v + " = 0;\n";
            args.push_back("&" + v);
        } else {
            args.push_back(c_literal(t.prim(), 0));
        }
    }
    std::string call = names.funs.at(entry) + "(" ;
    for (std::size_t i = 0; i < args.size(); ++i) call += (i ? ", " : "") + args[i];
    call += ")";
    if (fd.rt.is(Ty::Kind::Unit)) {
        s += "    " + call + ";\n    printf(\"0\\n\");\n    return 0;\n}\n";
        return s;
    }
    const bool u64 = fd.rt.is_prim() && !fd.rt.prim().is_signed() && fd.rt.prim().bits == 64 && !fd.rt.is_bool();
    s += "    " + typed_name(fd.rt, "__bpl_result") + " = " + call + ";\n";
    if (u64) s += "    printf(\"%llu\\n\", (unsigned long long)__bpl_result);\n";
    else s += "    printf(\"%lld\\n\", (long long)__bpl_result);\n";
    s += "    return (int)((long long)__bpl_result & 0xff);\n}\n";
    return s;
}

} // namespace

CUnit emit_program(const TypedProgram& tp, const CgenOptions& opts) {
    const UnitNames names = unit_names(tp);
    CUnit u;
    u.prelude = prelude(opts.mode, tp.ctx.pi);
    uint32_t map_index = 0;
    std::string globals_text;
    for (const auto& d : tp.program.decls) {
        if (const auto* g = std::get_if<GlobDecl>(&d)) {
            u.globals.push_back(global_def(*g, names, g->is_map ? map_index++ : 0));
        } else if (const auto* x = std::get_if<ExtDecl>(&d)) {
            u.globals.push_back(extern_decl(*x, names));
        }
    }
    const std::string stubs = helper_stubs(opts.mode, tp, opts.world);
    for (const auto& name : tp.fun_order) u.functions.push_back(lower_function(tp.funs.at(name), tp, names, opts.mode));
    if (opts.mode == CMode::Host) {
        if (auto entry = choose_entry(tp, opts.entry)) u.main_shim = main_shim(tp, names, *entry, opts.world);
        else if (opts.entry) throw std::invalid_argument("no function named '" + *opts.entry + "'");
    }
    u.text = u.prelude + "\n";
    for (const auto& g : u.globals) u.text += g;
    u.text += "\n" + stubs;
    for (const auto& f : u.functions) u.text += "\n" + f.text;
    if (!u.main_shim.empty()) u.text += "\n" + u.main_shim;
    return u;
}

// ---------------------------------------------------------------- fragments

std::string CFragment::text() const {
    std::string s;
    for (const auto& d : decls) s += d + "\n";
    for (const auto& l : lines) s += l;
    if (!value.empty()) s += "/* value: " + value + " */\n";
    return s;
}

CFragment lower_fragment(const TypingContext& ctx, const ExprPtr& e) {
    const Typing t = elaborate_expr(ctx, e);
    UnitNames names;
    for (const auto& [name, sig] : ctx.psi) names.externals[name] = name == "htons" ? "__bpl_htons" : name;
    for (const auto& [name, sig] : ctx.funs) names.funs[name] = mangle_global(name, "fn_");
    for (const auto& [name, ty] : ctx.globals) names.globals[name] = mangle_global(name, "g_");
    Lowerer low(ctx.pi, names);
    for (const auto& [x, ty] : ctx.gamma) low.bind_free(x, ty);
    CFragment f;
    f.value = low.lower_value(t.elaborated);
    f.decls = low.decls;
    for (const auto& s : low.root.body) f.lines.push_back(render(s, 0));
    f.tree = std::move(low.root);
    return f;
}

namespace {

CFragment lower_checked(const TypingContext& ctx, const ExprPtr& e, bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("expected ") + what);
    return lower_fragment(ctx, e);
}

} // namespace

CFragment lower_ref(const TypingContext& ctx, const ExprPtr& e) {
    return lower_checked(ctx, e, e->kind == ExprKind::Prim && e->op == PrimOpKind::Ref, "a ref expression");
}

CFragment lower_for(const TypingContext& ctx, const ExprPtr& e) {
    return lower_checked(ctx, e, e->kind == ExprKind::For, "a for loop");
}

CFragment lower_guarded_binop(const TypingContext& ctx, const ExprPtr& e) {
    return lower_checked(ctx, e, e->kind == ExprKind::Prim && e->op == PrimOpKind::Bop, "a binary operation");
}

CFragment lower_match_option(const TypingContext& ctx, const ExprPtr& e) {
    return lower_checked(ctx, e, e->kind == ExprKind::Match, "an option match");
}

CFragment lower_match_bytes(const TypingContext& ctx, const ExprPtr& e) {
    return lower_checked(ctx, e, e->kind == ExprKind::Match, "a bytes match");
}

} // namespace beepl
