// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

namespace beepl {

namespace {

CorpusCheck check(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

std::string function_text(const CUnit& u, const std::string& name) {
    for (const auto& f : u.functions)
        if (f.name == name) return f.text;
    return {};
}

std::optional<Value> run_value(const TypedProgram& tp, const std::string& entry, ExternalWorld w, std::string& why) {
    RunResult r = run_program(tp, entry, w);
    if (!r.eval.ok()) {
        why = r.eval.reason.empty() ? "no value" : r.eval.reason;
        return std::nullopt;
    }
    if (!r.state.monitor.clean()) {
        why = "monitor events";
        return std::nullopt;
    }
    return r.eval.value;
}

std::string packet_with_ethertype(const char* type) {
    return std::string("ff ff ff ff ff ff 00 11 22 33 44 55 ") + type;
}

} // namespace

std::string corpus_dir() {
#ifdef BEEPL_CORPUS_DIR
    return BEEPL_CORPUS_DIR;
#else
    return "corpus";
#endif
}

std::string read_corpus(const std::string& file, const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / file);
    if (!in) throw std::runtime_error("cannot read corpus file " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string normalize_c(const std::string& c_text) {
    static const std::regex temp_prefix(R"(__bpl_\w+\.)");
    static const std::regex spaces(R"([ \t]+)");
    return std::regex_replace(std::regex_replace(c_text, temp_prefix, ""), spaces, " ");
}

std::vector<CorpusCheck> run_cve_corpus(const std::string& dir) {
    std::vector<CorpusCheck> out;
    auto load = [&](const std::string& f) { return check_program(parse_program(read_corpus(f, dir))); };

    // Dereference of a lookup result without a match.
    try {
        load("bprog2.bpl");
        out.push_back(check("bprog2 rejected", false, "program was accepted"));
    } catch (const CompileError& e) {
        out.push_back(check("bprog2 rejected", e.diag.code == "DerefOfOption", e.diag.code + ": " + e.diag.message));
    }

    // Lookup result guarded by a match.
    try {
        const TypedProgram tp = load("bprog3.bpl");
        const CUnit u = emit_program(tp);
        const std::string text = normalize_c(function_text(u, "bprog3"));
        const auto guard = text.find("p == NULL");
        const auto use = text.find("*", text.find("p == NULL") == std::string::npos ? 0 : guard);
        const bool audit = audit_dereferences(u).empty();
        out.push_back(check("bprog3 null guard", guard != std::string::npos && use != std::string::npos && audit,
                            guard == std::string::npos ? "no 'p == NULL' test in emitted C"
                                                       : (audit ? "guard precedes the dereference"
                                                                : "dereference audit failed")));
        ExternalWorld hit;
        hit.maps["counter_table"][1000] = 42;
        std::string why;
        auto v1 = run_value(tp, "bprog3", hit, why);
        auto v2 = run_value(tp, "bprog3", ExternalWorld{}, why);
        out.push_back(check("bprog3 runs", v1 && v2 && v1->i == 42 && v2->i == -1,
                            v1 && v2 ? "hit " + to_string(*v1) + ", miss " + to_string(*v2) : why));
    } catch (const std::exception& e) {
        out.push_back(check("bprog3 null guard", false, e.what()));
    }

    // Division by a register truncated to zero.
    try {
        const TypedProgram tp = load("bprog1.bpl");
        std::string why;
        auto v = run_value(tp, "bprog1", ExternalWorld{}, why);
        const ExprPtr frag = parse_expr("let w0 : int = (int)0x100000000L in let w1 : int = 3 in w1 % w0");
        State s = empty_state(tp.ctx);
        ExternalWorld w;
        const EvalResult m = eval_multi(s, w, elaborate_expr(tp.ctx, frag).elaborated);
        const std::string text = normalize_c(function_text(emit_program(tp), "bprog1"));
        const bool guard = text.find("w0 == 0 ?") != std::string::npos;
        const bool zero = m.ok() && m.value.i == 0 && s.monitor.clean();
        out.push_back(check("bprog1 modulo", v && v->i == 2 && zero && guard,
                            "w1 % w0 = " + (m.ok() ? to_string(m.value) : m.reason) + ", result " +
                                (v ? to_string(*v) : why) + (guard ? ", zero guard emitted" : ", zero guard missing")));
    } catch (const std::exception& e) {
        out.push_back(check("bprog1 modulo", false, e.what()));
    }

    // Packet header read behind a bounds check.
    try {
        const TypedProgram tp = load("bprog4.bpl");
        const std::string text = normalize_c(function_text(emit_program(tp), "bprog4"));
        const auto bound = text.find("start + sizeof(struct ethhdr) > end");
        const auto access = text.find("eth->");
        out.push_back(check("bprog4 bounds check", bound != std::string::npos && access != std::string::npos &&
                                                       bound < access,
                            bound == std::string::npos ? "bounds test missing" : "bounds test precedes header access"));
        std::string why;
        auto run_with = [&](const std::string& hex) {
            ExternalWorld w;
            w.packet = parse_hex_bytes(hex);
            return run_value(tp, "bprog4", w, why);
        };
        auto v6 = run_with(packet_with_ethertype("86 dd"));
        auto v4 = run_with(packet_with_ethertype("08 00"));
        auto shrt = run_with("ff ff");
        const bool ok = v6 && v4 && shrt && v6->i == 1 && v4->i == 2 && shrt->i == 1;
        out.push_back(check("bprog4 runs", ok,
                            ok ? "ipv6 drop, ipv4 pass, short frame drop"
                               : "unexpected outcome" + (why.empty() ? std::string() : ": " + why)));
    } catch (const std::exception& e) {
        out.push_back(check("bprog4 bounds check", false, e.what()));
    }

    // Oversized shift.
    try {
        const TypedProgram tp = load("shift.bpl");
        std::string why;
        auto v = run_value(tp, "shift", ExternalWorld{}, why);
        out.push_back(check("shift", v && v->i == 0, v ? "r >> r = " + to_string(*v) : why));
    } catch (const std::exception& e) {
        out.push_back(check("shift", false, e.what()));
    }
    return out;
}

} // namespace beepl
