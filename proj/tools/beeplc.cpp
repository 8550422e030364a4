// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

namespace {

using namespace beepl;

enum Exit : int { Ok = 0, Diagnostics = 1, Violation = 2, Usage = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int report(const CompileError& e, const std::string& file, bool json) {
    if (json) std::cout << diagnostics_to_json({e.diag}) << "\n";
    else std::cerr << render_diagnostic(e.diag, file) << "\n";
    return Diagnostics;
}

int cmd_check(const std::string& file, bool json) {
    const std::string src = slurp(file);
    try {
        const TypedProgram tp = check_program(parse_program(src));
        if (json) {
            std::cout << diagnostics_to_json({}) << "\n";
            return Ok;
        }
        std::cout << file << ": ok (" << tp.program.decls.size() << " declarations)\n";
        for (const auto& [name, f] : tp.funs) std::cout << "  " << name << " : " << to_string(f.inferred) << "\n";
        return Ok;
    } catch (const CompileError& e) {
        return report(e, file, json);
    }
}

int cmd_run(const std::string& file, const std::optional<std::string>& entry, uint64_t fuel, bool trace,
            const std::optional<std::string>& packet) {
    const std::string src = slurp(file);
    TypedProgram tp;
    try {
        tp = check_program(parse_program(src));
    } catch (const CompileError& e) {
        return report(e, file, false);
    }
    const auto chosen = choose_entry(tp, entry);
    if (!chosen) {
        std::cerr << file << ": no entry point" << (entry ? " named '" + *entry + "'" : std::string()) << "\n";
        return Usage;
    }
    ExternalWorld w;
    if (packet) w.packet = parse_hex_bytes(slurp(*packet));
    StepObserver obs;
    if (trace) obs = [](const StepOutcome& o, const State& s) { std::cout << trace_line(o, s) << "\n"; };
    RunResult r = run_program(tp, *chosen, w, fuel, obs);
    for (const auto& call : w.io_log) std::cerr << "io: " << call << "\n";
    for (const auto& ev : r.state.monitor.events) std::cerr << "monitor: " << ev << "\n";
    switch (r.eval.status) {
    case EvalResult::Status::Value: break;
    case EvalResult::Status::FuelExhausted:
        std::cerr << "fuel exhausted after " << r.eval.steps << " steps\n";
        return Violation;
    case EvalResult::Status::Stuck:
        std::cerr << "stuck after " << r.eval.steps << " steps: " << r.eval.reason << "\n";
        return Violation;
    }
    std::cout << to_string(r.eval.value) << "\n";
    return r.state.monitor.clean() && !r.eval.value.is_undef() ? Ok : Violation;
}

int cmd_emit(const std::string& file, const std::string& out, const std::string& mode,
             const std::optional<std::string>& entry) {
    const std::string src = slurp(file);
    try {
        CgenOptions opts;
        opts.mode = mode == "ebpf" ? CMode::Ebpf : CMode::Host;
        opts.entry = entry;
        const CUnit unit = emit_program(check_program(parse_program(src)), opts);
        std::ofstream o(out, std::ios::binary);
        if (!o) throw UsageError("cannot write " + out);
        o << unit.text;
        return Ok;
    } catch (const CompileError& e) {
        return report(e, file, false);
    }
}

int cmd_selftest(std::size_t n, std::size_t diff_n, uint64_t seed, const std::optional<std::string>& cc,
                 bool skip_diff, bool json) {
    bool ok = true;
    const auto corpus = run_cve_corpus();
    for (const auto& c : corpus) ok = ok && c.ok;
    const SuiteResult suite = run_property_suite(n, seed);
    ok = ok && suite.failures.empty();
    DiffResult diff;
    if (skip_diff) {
        diff.skipped = true;
        diff.skip_reason = "disabled on the command line";
    } else {
        diff = run_differential(diff_n, seed, cc);
        ok = ok && diff.mismatches.empty();
    }
    if (json) {
        std::cout << "{\"corpus\": " << corpus_json(corpus) << ",\n\"properties\": " << suite_json(suite)
                  << ",\n\"differential\": " << diff_json(diff) << "}\n";
    } else {
        for (const auto& c : corpus) std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
        std::cout << suite_summary(suite) << "\n" << diff_summary(diff) << "\n";
    }
    return ok ? Ok : Violation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BeePL checker, interpreter and C emitter"};
    app.require_subcommand(1);

    std::string file;
    bool json = false;
    auto* check = app.add_subcommand("check", "Parse and type check a program");
    check->add_option("file", file, "Source file")->required();
    check->add_flag("--json", json, "Machine-readable diagnostics");

    std::optional<std::string> entry;
    uint64_t fuel = kDefaultFuel;
    bool trace = false;
    std::optional<std::string> packet;
    auto* run = app.add_subcommand("run", "Evaluate a program with the reference interpreter");
    run->add_option("file", file, "Source file")->required();
    run->add_option("--entry", entry, "Entry function");
    run->add_option("--fuel", fuel, "Step limit");
    run->add_flag("--trace", trace, "Print every reduction step");
    run->add_option("--packet", packet, "File with packet bytes in hex");

    std::string out;
    std::string mode = "host";
    auto* emit = app.add_subcommand("emit-c", "Translate a program to C");
    emit->add_option("file", file, "Source file")->required();
    emit->add_option("-o", out, "Output file")->required();
    emit->add_option("--mode", mode, "Output flavour")->check(CLI::IsMember({"host", "ebpf"}));
    emit->add_option("--entry", entry, "Entry function for the host main");

    std::size_t n = 1000;
    std::size_t diff_n = 100;
    uint64_t seed = 1;
    std::optional<std::string> cc;
    bool skip_diff = false;
    auto* self = app.add_subcommand("selftest", "Corpus, property suite and differential run");
    self->add_option("--n", n, "Generated programs for the property suite");
    self->add_option("--diff-n", diff_n, "Generated programs for the differential run");
    self->add_option("--seed", seed, "Base seed");
    self->add_option("--cc", cc, "C compiler for the differential run");
    self->add_flag("--skip-differential", skip_diff, "Do not compile generated C");
    self->add_flag("--json", json, "JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Usage;
    }

    try {
        if (*check) return cmd_check(file, json);
        if (*run) return cmd_run(file, entry, fuel, trace, packet);
        if (*emit) return cmd_emit(file, out, mode, entry);
        if (*self) return cmd_selftest(n, diff_n, seed, cc, skip_diff, json);
    } catch (const UsageError& e) {
        std::cerr << "beeplc: " << e.what() << "\n";
        return Usage;
    } catch (const std::exception& e) {
        std::cerr << "beeplc: " << e.what() << "\n";
        return Diagnostics;
    }
    return Usage;
}
