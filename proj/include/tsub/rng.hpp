#pragma once

#include <array>
#include <cstring>
#include <string_view>

#include "tsub/bytes.hpp"
#include "tsub/hash.hpp"

namespace tsub {

// Deterministic byte stream: block_i = SHA-256(state || i). Every random
// choice in the artifact flows from one of these so that a fixed seed
// reproduces keys, ciphertexts and simulator runs byte for byte.
class Drbg {
public:
    explicit Drbg(uint64_t seed) {
        ByteWriter w;
        w.raw(as_bytes("tsub-drbg-v1"));
        w.u64(seed);
        state_ = sha256(w.data());
    }

    explicit Drbg(ByteView seed) { state_ = sha256(seed); }

    void fill(uint8_t* out, size_t n) {
        while (n > 0) {
            ByteWriter w;
            w.raw(ByteView{state_.data(), state_.size()});
            w.u64(counter_++);
            Digest block = sha256(w.data());
            size_t take = n < block.size() ? n : block.size();
            std::memcpy(out, block.data(), take);
            out += take;
            n -= take;
        }
    }

    Bytes bytes(size_t n) {
        Bytes out(n);
        fill(out.data(), n);
        return out;
    }

    uint64_t next_u64() {
        uint8_t b[8];
        fill(b, 8);
        uint64_t v = 0;
        for (uint8_t x : b) v = v << 8 | x;
        return v;
    }

    // value in [0, bound), bound > 0
    uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

    // Independent child stream; the (state, label) pair documents the split.
    Drbg fork(std::string_view label) {
        ByteWriter w;
        w.raw(ByteView{state_.data(), state_.size()});
        w.raw(as_bytes("/fork/"));
        w.raw(as_bytes(label));
        return Drbg(ByteView{w.data()});
    }

private:
    Digest state_{};
    uint64_t counter_ = 0;
};

}  // namespace tsub
