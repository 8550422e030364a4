// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cstring>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "internal.hpp"

namespace beepl {

using namespace cgen_detail;

namespace {

using Safe = std::set<std::string>;

// nullopt: control does not fall through.
using Flow = std::optional<Safe>;

// `&x` names an object, so it is never null.
bool address_of(const std::string& p) { return addressed_object(p).has_value(); }

Flow meet(const Flow& a, const Flow& b) {
    if (!a) return b;
    if (!b) return a;
    Safe out;
    std::set_intersection(a->begin(), a->end(), b->begin(), b->end(), std::inserter(out, out.begin()));
    return out;
}

class DerefAudit {
  public:
    explicit DerefAudit(std::string fn) : fn_(std::move(fn)) {}

    Flow walk(const std::vector<CStmt>& stmts, Safe safe) {
        for (const auto& s : stmts) {
            Flow f = visit(s, safe);
            if (!f) return std::nullopt;
            safe = std::move(*f);
        }
        return safe;
    }

    std::set<std::string> violations;

  private:
    Flow visit(const CStmt& s, Safe safe) {
        switch (s.kind) {
        case CStmt::Kind::Block: return walk(s.body, std::move(safe));
        case CStmt::Kind::Line: {
            for (const auto& p : s.derefs)
                if (!safe.count(p) && !address_of(p))
                    violations.insert(fn_ + ": '" + s.text + "' dereferences '" + p + "' without a dominating check");
            static const std::regex assign(R"(^(\w+) = )");
            std::smatch m;
            if (std::regex_search(s.text, m, assign)) safe.erase(m[1].str());
            if (s.defines) {
                const bool src_safe = s.source && (safe.count(*s.source) || address_of(*s.source));
                const bool ok = s.safe_kind != SafeKind::Copy || src_safe;
                if (s.safe_kind == SafeKind::OptionGuardedCopy && s.source && !src_safe) {
                    // The guard on the source must dominate the copy.
                    violations.insert(fn_ + ": '" + s.text + "' copies an unchecked option");
                } else if (ok) {
                    safe.insert(*s.defines);
                }
            }
            if (s.text.rfind("return", 0) == 0) return std::nullopt;
            return safe;
        }
        case CStmt::Kind::If: {
            Safe else_in = safe;
            if (s.null_guard) else_in.insert(*s.null_guard);
            return meet(walk(s.body, safe), walk(s.orelse, else_in));
        }
        case CStmt::Kind::For: {
            Safe entry = safe;
            for (int i = 0; i < 8; ++i) {
                Flow out = walk(s.body, entry);
                Flow next = meet(Flow(entry), out);
                if (*next == entry) break;
                entry = *next;
            }
            return entry;
        }
        }
        return safe;
    }

    std::string fn_;
};

bool positive_literal(const std::string& t, bool shift) {
    std::size_t i = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == 0) return false;
    for (std::size_t j = i; j < t.size(); ++j)
        if (!std::strchr("uUlL", t[j])) return false;
    const unsigned long long v = std::stoull(t.substr(0, i));
    return shift ? v < 64 : v != 0;
}

// Right operand starting at s[i]: an identifier, a literal, or a parenthesised group.
std::string operand(const std::string& s, std::size_t i) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) return {};
    if (s[i] == '(') {
        int depth = 0;
        std::size_t j = i;
        for (; j < s.size(); ++j) {
            if (s[j] == '(') ++depth;
            if (s[j] == ')' && --depth == 0) break;
        }
        return s.substr(i, j - i + 1);
    }
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
    return s.substr(i, j - i);
}

std::string strip_literals(const std::string& line) {
    std::string out;
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_str) {
            if (c == '\\') ++i;
            else if (c == '"') in_str = false;
            continue;
        }
        if (c == '"') {
            in_str = true;
            out += "\"\"";
            continue;
        }
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
        out += c;
    }
    return out;
}

} // namespace

std::vector<std::string> audit_dereferences(const CFunction& f) {
    DerefAudit a(f.name);
    Safe init;
    for (const auto& [p, k] : f.safe_params) init.insert(p);
    a.walk(f.body.body, init);
    return {a.violations.begin(), a.violations.end()};
}

std::vector<std::string> audit_dereferences(const CUnit& u) {
    std::vector<std::string> out;
    for (const auto& f : u.functions)
        for (auto& v : audit_dereferences(f)) out.push_back(std::move(v));
    return out;
}

std::vector<std::string> audit_guarded_ops(const std::string& c_text) {
    std::vector<std::string> out;
    std::istringstream in(c_text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_literals(raw);
        if (line.find("#include") != std::string::npos) continue;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            std::size_t width = 0;
            bool shift = false;
            if ((c == '<' || c == '>') && i + 1 < line.size() && line[i + 1] == c) {
                width = 2;
                shift = true;
            } else if (c == '/' || c == '%') {
                const char prev = i ? line[i - 1] : ' ';
                const char next = i + 1 < line.size() ? line[i + 1] : ' ';
                if (prev == '*' || next == '*' || next == '=') continue;
                width = 1;
            } else {
                continue;
            }
            const std::string rhs = operand(line, i + width);
            i += width - 1;
            if (positive_literal(rhs, shift)) continue;
            const std::string guard = shift ? "(uint64_t)" + rhs + " >= " : rhs + " == 0 ?";
            if (!rhs.empty() && line.find(guard) != std::string::npos) continue;
            out.push_back("line " + std::to_string(lineno) + ": unguarded '" + std::string(1, c) +
                          (shift ? std::string(1, c) : "") + "' with right operand '" + rhs + "'");
        }
    }
    return out;
}

std::vector<std::string> audit_guarded_ops(const CUnit& u) {
    std::vector<std::string> out;
    for (const auto& f : u.functions)
        for (auto& v : audit_guarded_ops(f.text)) out.push_back(f.name + ": " + v);
    return out;
}

} // namespace beepl
