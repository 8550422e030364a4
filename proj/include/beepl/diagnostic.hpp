// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace beepl {

struct Span {
    int line = 0;
    int col = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    Span span;
    std::optional<std::string> note;
    // Name of the typing rule whose premise failed, when the error comes from the checker.
    std::string rule;
};

struct CompileError final : std::runtime_error {
    Diagnostic diag;

    explicit CompileError(Diagnostic d) : std::runtime_error(d.code + ": " + d.message), diag(std::move(d)) {}
    CompileError(std::string code, std::string message, Span span = {}, std::string rule = {})
        : CompileError(Diagnostic{Severity::Error, std::move(code), std::move(message), span, std::nullopt,
                                  std::move(rule)}) {}
};

// `file:line:col: error[CODE]: message`
std::string render_diagnostic(const Diagnostic& d, const std::string& file);

// JSON array, one object per diagnostic.
std::string diagnostics_to_json(const std::vector<Diagnostic>& diags);

} // namespace beepl
