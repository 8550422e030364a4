// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beepl/core.hpp"
#include "beepl/typecheck.hpp"

namespace beepl {

// ---------------------------------------------------------------- memory

enum class Perm { Freeable, ReadOnly };

struct Block {
    uint64_t size = 0;
    Perm perm = Perm::Freeable;
    std::map<int64_t, Value> cells;
    // Byte image for packet regions and array contents.
    std::vector<uint8_t> raw;
};

class Memory {
  public:
    uint64_t alloc(uint64_t size, Perm perm = Perm::Freeable);
    uint64_t alloc_raw(std::vector<uint8_t> bytes, Perm perm = Perm::ReadOnly);
    void free_block(uint64_t b);

    [[nodiscard]] const Block* block(uint64_t b) const;
    Block* block(uint64_t b);
    [[nodiscard]] bool valid_access(uint64_t b, int64_t off, uint64_t size, Perm needed) const;
    [[nodiscard]] std::optional<Value> load(uint64_t b, int64_t off) const;
    void store(uint64_t b, int64_t off, const Value& v);
    [[nodiscard]] std::optional<uint8_t> byte(uint64_t b, int64_t off) const;

    [[nodiscard]] uint64_t next_block() const { return next_; }
    [[nodiscard]] const std::map<uint64_t, Block>& blocks() const { return blocks_; }

  private:
    std::map<uint64_t, Block> blocks_;
    uint64_t next_ = 1;
};

// ---------------------------------------------------------------- external world

struct ExternalWorld {
    // map name -> key -> stored value
    std::map<std::string, std::map<uint64_t, int64_t>> maps;
    uint64_t uid_gid = 0x000003E8000003E8ULL;
    std::vector<uint8_t> packet;
    std::vector<std::string> io_log;
};

// Parses whitespace-separated hex bytes ("dd 86", "dd86", "0xdd 0x86").
std::vector<uint8_t> parse_hex_bytes(const std::string& text);

// ---------------------------------------------------------------- state

struct Monitor {
    uint64_t null_derefs = 0;
    uint64_t uninit_reads = 0;
    uint64_t undef_values = 0;
    uint64_t out_of_bounds = 0;
    std::vector<std::string> events;

    [[nodiscard]] bool clean() const {
        return null_derefs == 0 && uninit_reads == 0 && undef_values == 0 && out_of_bounds == 0;
    }
};

struct Binding {
    uint64_t block = 0;
    Ty ty;
};

struct State {
    std::shared_ptr<const std::map<std::string, FunDecl>> funs; // Δ functions
    std::map<std::string, Binding> globals;                     // Δ globals
    std::map<std::string, Binding> omega;                       // Ω
    Memory theta;                                               // Θ
    std::map<uint64_t, Ty> sigma;                               // Σ: block -> Ref(content)
    CompositeEnv pi;
    std::map<std::string, ExtSig> psi;
    std::map<std::string, Constant> constants;
    std::map<uint64_t, std::string> map_names; // map object block -> global name
    std::map<std::pair<std::string, uint64_t>, uint64_t> lookup_cache;
    uint64_t packet_block = 0;
    uint64_t fresh = 0;
    Monitor monitor;
    // Mutation switch: when false, BOPV applies the operator even on unsafe operands.
    bool guard_unsafe = true;
};

struct StepOutcome {
    enum class Kind { Stepped, IsValue, Stuck };
    Kind kind = Kind::IsValue;
    ExprPtr expr;
    std::string rule;
    std::string reason;
};

// One small step. Mutates s (memory, Ω, Σ, monitor) when a rule allocates or writes.
StepOutcome step(State& s, ExternalWorld& w, const ExprPtr& e);

struct EvalResult {
    enum class Status { Value, FuelExhausted, Stuck };
    Status status = Status::Value;
    Value value;
    ExprPtr expr;
    uint64_t steps = 0;
    std::string reason;

    [[nodiscard]] bool ok() const { return status == Status::Value; }
};

using StepObserver = std::function<void(const StepOutcome&, const State&)>;

constexpr uint64_t kDefaultFuel = 1'000'000;

EvalResult eval_multi(State& s, ExternalWorld& w, const ExprPtr& e, uint64_t fuel = kDefaultFuel,
                      const StepObserver& observer = {});

// ---------------------------------------------------------------- operators

bool unsafe(BinOp op, const Value& a, const Value& b);
// Wrapping semantics at the operand width. Returns undef when the operation is mathematically undefined.
Value bop_sem(BinOp op, const Value& a, const Value& b);
Value uop_sem(const UnOp& op, const Value& v);
uint64_t range(const Value& lo, const Value& hi, Dir d);

// ---------------------------------------------------------------- substitution

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);

// ---------------------------------------------------------------- machine

// Σ, Ω and Δ extended with a fresh program: globals allocated in declaration order.
State initial_state(const TypedProgram& tp, const ExternalWorld& w);
State empty_state(const TypingContext& ctx = context_from_registry(default_helper_registry()));

// Builds the call expression for an entry point, allocating its context argument if needed.
ExprPtr entry_call(State& s, const ExternalWorld& w, const FunDecl& fd);

std::optional<std::string> choose_entry(const TypedProgram& tp, const std::optional<std::string>& requested);

struct RunResult {
    EvalResult eval;
    State state;
};

RunResult run_program(const TypedProgram& tp, const std::string& entry, ExternalWorld& w,
                      uint64_t fuel = kDefaultFuel, const StepObserver& observer = {});

struct ExtractResult {
    ExprPtr value;
    std::map<std::string, ExprPtr> fields;
};

// Decodes τx from a bytes region; nullopt when the region is shorter than sizeof(τx).
std::optional<ExtractResult> extract(State& s, const Value& bytes, const Ty& target);

// Γ and Σ for typing an intermediate expression of s.
TypingContext typing_context_for(const State& s, const TypingContext& base);

struct WellFormedReport {
    bool ok = true;
    std::vector<std::string> violations;
};

WellFormedReport well_formed_report(const State& s);
bool well_formed(const State& s);

// Type of a value expression in s, when it has one.
std::optional<Ty> value_type(const State& s, const Expr& v);

std::string trace_line(const StepOutcome& o, const State& s);

} // namespace beepl
