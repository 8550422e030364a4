// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "beepl/interp.hpp"

namespace beepl::detail {

// Fresh Freeable block sized for τ, registered in Σ as Ref(τ).
uint64_t alloc_typed(State& s, const Ty& t);
// Stores a value of type τ at (b, off); struct values copy field by field.
void write_value(State& s, uint64_t b, int64_t off, const Ty& t, const Expr& v);
void copy_struct(State& s, uint64_t src, int64_t src_off, uint64_t dst, int64_t dst_off, const std::string& id);
// Fresh block holding a copy of the struct at (b, off).
uint64_t clone_struct(State& s, uint64_t b, int64_t off, const std::string& id);
ExprPtr zero_value(State& s, const Ty& t);
void note(Monitor& m, const std::string& event);

} // namespace beepl::detail
