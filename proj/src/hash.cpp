// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/hash.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace staterent
{
bool Hash256::is_zero() const noexcept
{
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Hash256 hash256(BytesView data)
{
    Hash256 out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.bytes.size())
        throw std::runtime_error{"sha256 digest failed"};
    return out;
}

Hash256 hash256(std::string_view data)
{
    return hash256(BytesView{reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
}

std::string to_hex(BytesView data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (const auto b : data)
    {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

namespace
{
int hex_digit(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    return -1;
}
}  // namespace

bool from_hex(std::string_view hex, Bytes& out)
{
    if (hex.size() % 2 != 0)
        return false;
    out.clear();
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
    {
        const int hi = hex_digit(hex[i]);
        const int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0)
            return false;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return true;
}

bool hash_from_hex(std::string_view hex, Hash256& out)
{
    Bytes tmp;
    if (hex.size() != 64 || !from_hex(hex, tmp))
        return false;
    std::copy(tmp.begin(), tmp.end(), out.bytes.begin());
    return true;
}
}  // namespace staterent
