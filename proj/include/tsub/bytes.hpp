#pragma once

#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsub/errors.hpp"

namespace tsub {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

// Unambiguous multi-segment concatenation used for every hash input that the
// construction writes as "a||b": each segment is prefixed with its 4-byte
// big-endian length.
inline Bytes concat_segments(std::initializer_list<ByteView> segments) {
    Bytes out;
    for (const auto& seg : segments) {
        const auto n = static_cast<uint32_t>(seg.size());
        out.push_back(static_cast<uint8_t>(n >> 24));
        out.push_back(static_cast<uint8_t>(n >> 16));
        out.push_back(static_cast<uint8_t>(n >> 8));
        out.push_back(static_cast<uint8_t>(n));
        out.insert(out.end(), seg.begin(), seg.end());
    }
    return out;
}

class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) {
        buf_.push_back(static_cast<uint8_t>(v >> 8));
        buf_.push_back(static_cast<uint8_t>(v));
    }
    void u32(uint32_t v) {
        u16(static_cast<uint16_t>(v >> 16));
        u16(static_cast<uint16_t>(v));
    }
    void u64(uint64_t v) {
        u32(static_cast<uint32_t>(v >> 32));
        u32(static_cast<uint32_t>(v));
    }
    void raw(ByteView v) { buf_.insert(buf_.end(), v.begin(), v.end()); }
    // length-prefixed string (2-byte big-endian length)
    void str(std::string_view s) {
        if (s.size() > 0xffff) throw ParseError("string too long for wire format");
        u16(static_cast<uint16_t>(s.size()));
        raw(as_bytes(s));
    }
    void var_bytes(ByteView v) {
        if (v.size() > 0xffffffffULL) throw ParseError("blob too long for wire format");
        u32(static_cast<uint32_t>(v.size()));
        raw(v);
    }

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        auto b = take(2);
        return static_cast<uint16_t>(b[0]) << 8 | b[1];
    }
    uint32_t u32() {
        uint32_t hi = u16(), lo = u16();
        return hi << 16 | lo;
    }
    uint64_t u64() {
        uint64_t hi = u32(), lo = u32();
        return hi << 32 | lo;
    }
    ByteView raw(size_t n) { return take(n); }
    std::string str() {
        auto n = u16();
        auto b = take(n);
        return std::string(b.begin(), b.end());
    }
    Bytes var_bytes() {
        auto n = u32();
        auto b = take(n);
        return Bytes(b.begin(), b.end());
    }

    bool done() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }
    void expect_done() const {
        if (!done()) throw Malformed("trailing bytes after wire payload");
    }

private:
    ByteView take(size_t n) {
        if (n > remaining()) throw Malformed("truncated wire payload");
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    ByteView data_;
    size_t pos_ = 0;
};

inline std::string to_hex(ByteView v) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(v.size() * 2);
    for (uint8_t b : v) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline Bytes from_hex(std::string_view s) {
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ParseError("invalid hex digit");
    };
    if (s.size() % 2 != 0) throw ParseError("odd-length hex string");
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
    return out;
}

}  // namespace tsub
