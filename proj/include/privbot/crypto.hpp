#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privbot::crypto {

using Digest = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;

Digest sha256(std::span<const std::uint8_t> data);
Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data);

/// Constant-time equality of two equally sized buffers.
bool equal_ct(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

std::string to_hex(std::span<const std::uint8_t> data);

/// Append-only little-endian byte sink.
class ByteWriter {
public:
    ByteWriter& put_u8(std::uint8_t v);
    ByteWriter& put_i64(std::int64_t v);
    ByteWriter& put_u64(std::uint64_t v);
    ByteWriter& put(std::span<const std::uint8_t> data);
    ByteWriter& put(std::string_view text);

    const Bytes& bytes() const noexcept { return buf_; }
    Bytes take() && { return std::move(buf_); }

private:
    Bytes buf_;
};

std::int64_t read_i64_le(std::span<const std::uint8_t> data);

} // namespace privbot::crypto
