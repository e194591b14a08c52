#pragma once

#include <cstdint>
#include <string>

#include "grouplaw/bigint.hpp"

namespace grouplaw {

// Little building blocks for the canonical byte encoding of group elements.
// The encoding is append-only and byte-stable: equal elements always produce
// equal bytes, and the format carries a leading version byte at the top level.

inline constexpr unsigned char kSerializationVersion = 1;

class ByteWriter {
public:
    void u8(unsigned char b) { out_.push_back(static_cast<char>(b)); }

    // LEB128-style unsigned varint.
    void uvarint(std::uint64_t v) {
        while (v >= 0x80) {
            u8(static_cast<unsigned char>((v & 0x7f) | 0x80));
            v >>= 7;
        }
        u8(static_cast<unsigned char>(v));
    }

    void svarint(std::int64_t v) {
        // zigzag
        uvarint((static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
    }

    void bigint(const BigInt& v) {
        int sign = v.sign();
        u8(static_cast<unsigned char>(sign + 1));  // 0,1,2 for -,0,+
        if (sign == 0) return;
        std::string mag;
        BigInt a = big_abs(v);
        while (a > 0) {
            mag.push_back(static_cast<char>(static_cast<unsigned>(a & 0xff)));
            a >>= 8;
        }
        uvarint(mag.size());
        out_.append(mag);  // little-endian magnitude
    }

    void bytes(const std::string& b) {
        uvarint(b.size());
        out_.append(b);
    }

    const std::string& str() const { return out_; }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

}  // namespace grouplaw
