// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "beepl/driver.hpp"

namespace fs = std::filesystem;

namespace beepl {

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

bool executable_on_path(const std::string& name) {
    if (name.find('/') != std::string::npos) return ::access(name.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':'))
        if (!dir.empty() && ::access((fs::path(dir) / name).c_str(), X_OK) == 0) return true;
    return false;
}

struct Proc {
    int status = -1;
    std::string out;
};

Proc capture(const std::string& cmd) {
    Proc p;
    FILE* f = ::popen(cmd.c_str(), "r");
    if (!f) return p;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, n);
    const int st = ::pclose(f);
    p.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return p;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

} // namespace

std::optional<std::string> find_c_compiler(const std::optional<std::string>& requested) {
    if (requested && !requested->empty()) return requested;
    if (const char* env = std::getenv("BEEPLC_CC"); env && *env) return std::string(env);
    for (const char* c : {"cc", "gcc", "clang"})
        if (executable_on_path(c)) return std::string(c);
    return std::nullopt;
}

std::string printed_value(const Value& v) {
    switch (v.kind) {
    case Value::Kind::Bool: return v.i ? "1" : "0";
    case Value::Kind::Int:
    case Value::Kind::Long: return to_string(v);
    case Value::Kind::Unit: return "0";
    default: return to_string(v);
    }
}

DiffCase differential_one(const TypedProgram& tp, const std::string& entry, const ExternalWorld& w,
                          const std::string& cc, const std::string& workdir) {
    DiffCase c;
    ExternalWorld iw = w;
    RunResult run = run_program(tp, entry, iw);
    if (!run.eval.ok()) {
        c.detail = "interpreter did not produce a value: " + run.eval.reason;
        return c;
    }
    c.interp = printed_value(run.eval.value);

    CgenOptions opts;
    opts.mode = CMode::Host;
    opts.entry = entry;
    opts.world = w;
    const CUnit unit = emit_program(tp, opts);
    auto findings = audit_dereferences(unit);
    for (auto& f : audit_guarded_ops(unit)) findings.push_back(std::move(f));
    if (!findings.empty()) {
        c.detail = "emitted C fails its audit: " + findings.front();
        return c;
    }
    fs::create_directories(workdir);
    static std::atomic<uint64_t> counter{0};
    const std::string stem = (fs::path(workdir) / ("prog" + std::to_string(counter++))).string();
    {
        std::ofstream out(stem + ".c");
        out << unit.text;
    }
    const Proc comp = capture(shell_quote(cc) + " -std=c11 -O1 -w -o " + shell_quote(stem) + " " +
                              shell_quote(stem + ".c") + " 2>&1");
    if (comp.status != 0) {
        c.detail = "C compilation failed: " + comp.out;
        return c;
    }
    const Proc run_native = capture(shell_quote(stem));
    c.native = trim(run_native.out);
    c.exit_code = run_native.status;
    std::error_code ec;
    fs::remove(stem, ec);
    fs::remove(stem + ".c", ec);

    const int expect_exit = static_cast<int>(static_cast<uint64_t>(run.eval.value.i) & 0xff);
    c.agree = c.native == c.interp && c.exit_code == expect_exit;
    if (!c.agree)
        c.detail = "interpreter " + c.interp + ", native " + c.native + " (exit " + std::to_string(c.exit_code) + ")";
    return c;
}

DiffResult run_differential(std::size_t n, uint64_t seed, const std::optional<std::string>& cc, const GenConfig& cfg,
                            unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    DiffResult res;
    const auto compiler = find_c_compiler(cc);
    if (!compiler || !executable_on_path(*compiler)) {
        res.skipped = true;
        res.skip_reason = compiler ? "C compiler '" + *compiler + "' not found" : "no C compiler available";
        return res;
    }
    res.compiler = *compiler;
    res.programs = n;
    if (!threads) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::string workdir =
        (fs::temp_directory_path() / ("beeplc-diff-" + std::to_string(::getpid()) + "-" + std::to_string(seed))).string();
    const ExternalWorld world = generator_world();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> agreed{0};
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const uint64_t s = sub_seed(seed ^ 0xD1FFULL, i);
            DiffCase c;
            try {
                Generated g = generate_program(s, cfg);
                c = differential_one(g.typed, "main", world, *compiler, workdir);
                c.source = g.source;
            } catch (const std::exception& ex) {
                c.detail = ex.what();
            }
            c.seed = s;
            if (c.agree) {
                ++agreed;
                continue;
            }
            std::lock_guard<std::mutex> lock(mu);
            res.mismatches.push_back(std::move(c));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::error_code ec;
    fs::remove_all(workdir, ec);
    res.agreed = agreed;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace beepl
