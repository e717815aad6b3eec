// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace staterent
{
using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

struct Hash256
{
    std::array<std::uint8_t, 32> bytes{};

    friend auto operator<=>(const Hash256&, const Hash256&) = default;

    /// Bit `i` of the digest, bit 0 being the most significant bit of byte 0.
    unsigned bit(unsigned i) const noexcept { return (bytes[i / 8] >> (7 - i % 8)) & 1u; }

    bool is_zero() const noexcept;
};

/// Name of the digest recorded in snapshot headers and metrics.
inline constexpr std::string_view kHashName = "sha256";

Hash256 hash256(BytesView data);
Hash256 hash256(std::string_view data);

std::string to_hex(BytesView data);
inline std::string to_hex(const Hash256& h)
{
    return to_hex(BytesView{h.bytes});
}

/// Strict lowercase hex decoding; returns false on odd length or any other character.
bool from_hex(std::string_view hex, Bytes& out);
bool hash_from_hex(std::string_view hex, Hash256& out);

struct Hash256Hasher
{
    std::size_t operator()(const Hash256& h) const noexcept
    {
        std::size_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = (v << 8) | h.bytes[i];
        return v;
    }
};
}  // namespace staterent
