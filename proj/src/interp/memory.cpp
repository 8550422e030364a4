// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cctype>

#include "beepl/interp.hpp"

namespace beepl {

uint64_t Memory::alloc(uint64_t size, Perm perm) {
    const uint64_t b = next_++;
    Block blk;
    blk.size = size;
    blk.perm = perm;
    blocks_.emplace(b, std::move(blk));
    return b;
}

uint64_t Memory::alloc_raw(std::vector<uint8_t> bytes, Perm perm) {
    const uint64_t b = alloc(bytes.size(), perm);
    blocks_.at(b).raw = std::move(bytes);
    return b;
}

void Memory::free_block(uint64_t b) { blocks_.erase(b); }

const Block* Memory::block(uint64_t b) const {
    auto it = blocks_.find(b);
    return it == blocks_.end() ? nullptr : &it->second;
}

Block* Memory::block(uint64_t b) {
    auto it = blocks_.find(b);
    return it == blocks_.end() ? nullptr : &it->second;
}

bool Memory::valid_access(uint64_t b, int64_t off, uint64_t size, Perm needed) const {
    const Block* blk = block(b);
    if (!blk || off < 0) return false;
    if (static_cast<uint64_t>(off) + size > blk->size) return false;
    return needed == Perm::ReadOnly || blk->perm == Perm::Freeable;
}

std::optional<Value> Memory::load(uint64_t b, int64_t off) const {
    const Block* blk = block(b);
    if (!blk) return std::nullopt;
    auto it = blk->cells.find(off);
    if (it == blk->cells.end()) return std::nullopt;
    return it->second;
}

void Memory::store(uint64_t b, int64_t off, const Value& v) { blocks_.at(b).cells[off] = v; }

std::optional<uint8_t> Memory::byte(uint64_t b, int64_t off) const {
    const Block* blk = block(b);
    if (!blk || off < 0 || static_cast<uint64_t>(off) >= blk->raw.size()) return std::nullopt;
    return blk->raw[static_cast<std::size_t>(off)];
}

std::vector<uint8_t> parse_hex_bytes(const std::string& text) {
    std::vector<uint8_t> out;
    std::string digits;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
            ++i;
            continue;
        }
        if (std::isxdigit(static_cast<unsigned char>(c))) {
            digits += c;
        } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
            throw CompileError("BadPacket", std::string("unexpected character '") + c + "' in hex input");
        }
    }
    if (digits.size() % 2 != 0) throw CompileError("BadPacket", "odd number of hex digits");
    for (std::size_t i = 0; i < digits.size(); i += 2)
        out.push_back(static_cast<uint8_t>(std::stoul(digits.substr(i, 2), nullptr, 16)));
    return out;
}

} // namespace beepl
