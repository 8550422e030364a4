// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <json.hpp>

#include "beepl/diagnostic.hpp"

namespace beepl {

std::string render_diagnostic(const Diagnostic& d, const std::string& file) {
    std::string s = file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": " +
                    (d.severity == Severity::Error ? "error" : "warning") + "[" + d.code + "]: " + d.message;
    if (!d.rule.empty()) s += " (rule " + d.rule + ")";
    if (d.note) s += "\n  note: " + *d.note;
    return s;
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : diags) {
        nlohmann::json o = {
            {"severity", d.severity == Severity::Error ? "error" : "warning"},
            {"code", d.code},
            {"message", d.message},
            {"line", d.span.line},
            {"col", d.span.col},
        };
        if (!d.rule.empty()) o["rule"] = d.rule;
        if (d.note) o["note"] = *d.note;
        arr.push_back(std::move(o));
    }
    return arr.dump(2);
}

} // namespace beepl
