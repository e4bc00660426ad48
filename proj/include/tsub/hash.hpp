#pragma once

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"

namespace tsub {

using Digest = std::array<uint8_t, 32>;

inline Digest sha256(ByteView data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw Error(Errc::io_error, "SHA-256 failed");
    return out;
}

inline Digest sha256(const Bytes& data) { return sha256(ByteView{data}); }

}  // namespace tsub
