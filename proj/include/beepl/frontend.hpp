// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "beepl/core.hpp"

namespace beepl {

struct Token {
    enum class Kind { Keyword, Ident, Int, String, Punct, Eof };
    Kind kind = Kind::Eof;
    std::string lexeme;
    Span span;
    // Int tokens: magnitude and optional type suffix.
    uint64_t int_value = 0;
    std::string suffix;
    bool is_long = false;
};

// Throws CompileError with code LexError.
std::vector<Token> tokenize(std::string_view source);

// Throws CompileError with code ParseError (or LexError, LiteralOutOfRange, ReservedIdentifier).
Program parse_program(std::string_view source);
ExprPtr parse_expr(std::string_view source);
Ty parse_type(std::string_view source);

// Surface text. Throws CompileError UnprintableInternalNode on internal nodes.
std::string print_expr(const Expr& e);
std::string print_expr(const ExprPtr& e);
// Like print_expr but renders internal nodes, for traces.
std::string debug_print(const Expr& e);
std::string print_type(const Ty& t);
std::string print_program(const Program& p);

// Type a bare literal gets with no contextual type.
PrimTy default_literal_type(int64_t value, bool magnitude_exceeds_int64);

} // namespace beepl
