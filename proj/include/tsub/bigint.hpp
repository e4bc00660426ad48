#pragma once

#include <gmpxx.h>

#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"
#include "tsub/rng.hpp"

namespace tsub {

inline Bytes to_bytes_be(const mpz_class& v, size_t width) {
    Bytes out(width, 0);
    size_t count = 0;
    // export writes ceil(bits/8) bytes; right-align into the fixed width
    if (mpz_sgn(v.get_mpz_t()) != 0) {
        size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        if (need > width) throw Malformed("integer too wide for fixed-width encoding");
        mpz_export(out.data() + (width - need), &count, 1, 1, 1, 0, v.get_mpz_t());
    }
    return out;
}

inline mpz_class from_bytes_be(ByteView b) {
    mpz_class v;
    if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

inline mpz_class mod_of(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline mpz_class mod_mul(const mpz_class& a, const mpz_class& b, const mpz_class& m) {
    return mod_of(a * b, m);
}

inline mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& m) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ZeroInverse("element has no inverse modulo the given modulus");
    return r;
}

// Uniform draw in [0, m): sample 128 extra bits and reduce, so the
// modular bias is negligible while staying deterministic per Drbg.
inline mpz_class draw_mod(Drbg& rng, const mpz_class& m) {
    size_t width = (mpz_sizeinbase(m.get_mpz_t(), 2) + 7) / 8 + 16;
    Bytes b = rng.bytes(width);
    return mod_of(from_bytes_be(b), m);
}

// Uniform draw in [1, m)
inline mpz_class draw_nonzero(Drbg& rng, const mpz_class& m) {
    for (;;) {
        mpz_class v = draw_mod(rng, m);
        if (v != 0) return v;
    }
}

}  // namespace tsub
