// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "beepl/cgen.hpp"
#include "beepl/core.hpp"
#include "beepl/interp.hpp"
#include "beepl/typecheck.hpp"

namespace beepl {

// ---------------------------------------------------------------- generator

struct GenConfig {
    int max_depth = 8;
    int max_helpers = 2;
    int max_loop_nesting = 2;
    bool use_structs = true;
    bool use_maps = true;
    bool use_io = true;
    // Bias division and shift operands toward 0, -1 and the type minimum.
    bool bias_operands = true;
};

struct Generated {
    uint64_t seed = 0;
    Program program; // as generated, before elaboration
    TypedProgram typed;
    std::string source;
};

// World the generated programs run against: seeded map entries and a small packet.
ExternalWorld generator_world();

// A well-typed program with helpers and an entry `main(): int`. Deterministic in seed.
Generated generate_program(uint64_t seed, const GenConfig& cfg = {});

uint64_t expr_size(const Expr& e);
uint64_t program_size(const Program& p);

// ---------------------------------------------------------------- shrinker

// Greedy type-preserving reduction: every candidate must still type check and still fail.
Program shrink_program(const Program& p, const std::function<bool(const TypedProgram&)>& still_fails,
                       int max_rounds = 500);

// ---------------------------------------------------------------- property harness

struct PropertyConfig {
    uint64_t fuel = kDefaultFuel;
    bool check_each_step = true;
    // Off only for mutation runs: the interpreter then evaluates unsafe operators without the 0 fallback.
    bool guard_unsafe = true;
};

struct PropertyReport {
    bool ok = true;
    std::string property; // first violated property
    std::string detail;
    uint64_t steps = 0;
    std::optional<Value> value;
    Monitor monitor;
};

// Progress, preservation (type kept, effect shrinks), termination within fuel, well-formed states,
// no undefined values, clean null and uninitialised-read monitors.
PropertyReport audit_program(const TypedProgram& tp, const std::string& entry, ExternalWorld w,
                             const PropertyConfig& cfg = {});

struct PropertyFailure {
    uint64_t seed = 0;
    PropertyReport report;
    std::string source;
    std::string shrunk;
};

struct SuiteResult {
    std::size_t programs = 0;
    std::size_t passed = 0;
    uint64_t total_steps = 0;
    uint64_t max_depth_seen = 0;
    double seconds = 0;
    std::vector<PropertyFailure> failures;
};

SuiteResult run_property_suite(std::size_t n, uint64_t seed, const GenConfig& gcfg = {},
                               const PropertyConfig& pcfg = {}, unsigned threads = 0);

uint64_t expr_depth(const Expr& e);
uint64_t sub_seed(uint64_t seed, uint64_t i);

// ---------------------------------------------------------------- differential

// $BEEPLC_CC, then cc, gcc and clang on PATH. Requested names are used verbatim.
std::optional<std::string> find_c_compiler(const std::optional<std::string>& requested = std::nullopt);

struct DiffCase {
    uint64_t seed = 0;
    std::string interp;
    std::string native;
    int exit_code = 0;
    bool agree = false;
    std::string detail;
    std::string source;
};

struct DiffResult {
    bool skipped = false;
    std::string skip_reason;
    std::string compiler;
    std::size_t programs = 0;
    std::size_t agreed = 0;
    double seconds = 0;
    std::vector<DiffCase> mismatches;
};

// Interpreter result versus the compiled host build of the same program.
DiffCase differential_one(const TypedProgram& tp, const std::string& entry, const ExternalWorld& w,
                          const std::string& cc, const std::string& workdir);

DiffResult run_differential(std::size_t n, uint64_t seed, const std::optional<std::string>& cc,
                            const GenConfig& cfg = {}, unsigned threads = 0);

// Decimal rendering shared by the interpreter side and the generated main.
std::string printed_value(const Value& v);

// ---------------------------------------------------------------- corpus

struct CorpusCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

std::string corpus_dir();
std::string read_corpus(const std::string& file, const std::string& dir = corpus_dir());

// Rejection, guard placement and runtime outcomes of the reference exploit programs.
std::vector<CorpusCheck> run_cve_corpus(const std::string& dir = corpus_dir());

// Strips `__bpl_<name>.` prefixes so emitted guards can be matched against their source shape.
std::string normalize_c(const std::string& c_text);

// ---------------------------------------------------------------- reports

std::string suite_json(const SuiteResult& r);
std::string diff_json(const DiffResult& r);
std::string corpus_json(const std::vector<CorpusCheck>& r);
std::string suite_summary(const SuiteResult& r);
std::string diff_summary(const DiffResult& r);

} // namespace beepl
