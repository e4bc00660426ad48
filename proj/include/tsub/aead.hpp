#pragma once

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <array>
#include <memory>
#include <string_view>

#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"

// DEM layer: HKDF-SHA256 turns the scheme's access key K (and, when active,
// the revocation rekey secret) into an AES-256-GCM key; the content name is
// both KDF context and associated data. Keys are single-use (fresh K per
// publish), so a fixed nonce is used.
namespace tsub::aead {

inline constexpr size_t KEY_BYTES = 32;
inline constexpr size_t TAG_BYTES = 16;

using Key = std::array<uint8_t, KEY_BYTES>;

inline Key derive_key(ByteView key_material, std::string_view context) {
    struct KdfFree {
        void operator()(EVP_KDF* p) const { EVP_KDF_free(p); }
        void operator()(EVP_KDF_CTX* p) const { EVP_KDF_CTX_free(p); }
    };
    std::unique_ptr<EVP_KDF, KdfFree> kdf(EVP_KDF_fetch(nullptr, "HKDF", nullptr));
    if (!kdf) throw Error(Errc::io_error, "HKDF unavailable");
    std::unique_ptr<EVP_KDF_CTX, KdfFree> ctx(EVP_KDF_CTX_new(kdf.get()));
    if (!ctx) throw Error(Errc::io_error, "HKDF context allocation failed");

    std::string digest = "SHA256";
    std::string salt = "tsub-dem-v1";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest.data(), 0),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_SALT, salt.data(), salt.size()),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY,
                                          const_cast<uint8_t*>(key_material.data()),
                                          key_material.size()),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO,
                                          const_cast<char*>(context.data()), context.size()),
        OSSL_PARAM_construct_end(),
    };
    Key out{};
    if (EVP_KDF_derive(ctx.get(), out.data(), out.size(), params) != 1)
        throw Error(Errc::io_error, "HKDF derive failed");
    return out;
}

namespace detail {
struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
inline constexpr std::array<uint8_t, 12> kNonce{};  // single-use keys
}  // namespace detail

// ciphertext || 16-byte tag
inline Bytes seal(const Key& key, ByteView plaintext, ByteView ad) {
    detail::CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                   detail::kNonce.data()) != 1)
        throw Error(Errc::io_error, "AES-GCM init failed");
    int len = 0;
    if (!ad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, ad.data(), static_cast<int>(ad.size())) != 1)
        throw Error(Errc::io_error, "AES-GCM AD failed");
    Bytes out(plaintext.size() + TAG_BYTES);
    if (!plaintext.empty() && EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                                                static_cast<int>(plaintext.size())) != 1)
        throw Error(Errc::io_error, "AES-GCM encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1)
        throw Error(Errc::io_error, "AES-GCM finalize failed");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, TAG_BYTES,
                            out.data() + plaintext.size()) != 1)
        throw Error(Errc::io_error, "AES-GCM tag failed");
    return out;
}

inline Bytes open(const Key& key, ByteView sealed, ByteView ad) {
    if (sealed.size() < TAG_BYTES) throw AeadFailure("sealed payload shorter than the tag");
    const size_t ptlen = sealed.size() - TAG_BYTES;
    detail::CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                   detail::kNonce.data()) != 1)
        throw Error(Errc::io_error, "AES-GCM init failed");
    int len = 0;
    if (!ad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, ad.data(), static_cast<int>(ad.size())) != 1)
        throw Error(Errc::io_error, "AES-GCM AD failed");
    Bytes out(ptlen);
    if (ptlen > 0 &&
        EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(ptlen)) != 1)
        throw AeadFailure("AES-GCM decrypt failed");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, TAG_BYTES,
                            const_cast<uint8_t*>(sealed.data() + ptlen)) != 1)
        throw Error(Errc::io_error, "AES-GCM set-tag failed");
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1)
        throw AeadFailure("authentication tag mismatch");
    return out;
}

}  // namespace tsub::aead
