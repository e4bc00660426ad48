#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "tsub/algebra.hpp"
#include "tsub/bigint.hpp"
#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"

// Sibling Intractable Function Family: a monic polynomial
// P(x) = x^n + a_1 x^{n-1} + ... + a_n over Z_q with P(root) = K for every
// designated root, i.e. P(x) = prod(x - r_i) + K. Publishing the coefficients
// lets any holder of one root recover K.
namespace tsub {

struct SiffPolynomial {
    std::vector<mpz_class> coeffs;  // a_1..a_n, degree-descending
    mpz_class modulus;

    size_t degree() const { return coeffs.size(); }
};

namespace siff {

// Coefficients are a pure function of (sorted roots, key).
inline SiffPolynomial build(std::vector<mpz_class> roots, const mpz_class& key,
                            const mpz_class& modulus) {
    if (roots.empty()) throw InvalidRange("SIFF polynomial needs at least one root");
    for (auto& r : roots) r = mod_of(r, modulus);
    std::sort(roots.begin(), roots.end());
    if (std::adjacent_find(roots.begin(), roots.end()) != roots.end())
        throw DuplicateRoot("SIFF roots must be pairwise distinct");

    // expand prod(x - r_i); poly[i] = coefficient of x^(n-i), poly[0] = 1
    std::vector<mpz_class> poly{1};
    for (const auto& r : roots) {
        poly.push_back(0);
        for (size_t i = poly.size() - 1; i >= 1; --i)
            poly[i] = mod_of(poly[i] - r * poly[i - 1], modulus);
    }
    poly.back() = mod_of(poly.back() + key, modulus);
    return {std::vector<mpz_class>(poly.begin() + 1, poly.end()), modulus};
}

// Horner evaluation of the monic polynomial.
inline mpz_class eval(const SiffPolynomial& p, const mpz_class& x) {
    mpz_class acc = 1;
    for (const auto& a : p.coeffs) acc = mod_of(acc * x + a, p.modulus);
    return acc;
}

inline SiffPolynomial build(const std::vector<Scalar>& roots, const Scalar& key) {
    std::vector<mpz_class> rs;
    rs.reserve(roots.size());
    for (const auto& r : roots) rs.push_back(r.value());
    return build(std::move(rs), key.value(), Scalar::modulus());
}

inline Scalar eval(const SiffPolynomial& p, const Scalar& x) {
    return Scalar(eval(p, x.value()));
}

// Wire form: 2-byte big-endian coefficient count, then the monic leading 1
// and a_1..a_n as fixed-width scalars, degree-descending. The explicit
// leading coefficient keeps the ciphertext at (|tau|+1) scalar fields.
inline void serialize(const SiffPolynomial& p, ByteWriter& w) {
    if (p.degree() + 1 > 0xffff) throw ParseError("SIFF degree too large for wire format");
    w.u16(static_cast<uint16_t>(p.degree() + 1));
    w.raw(to_bytes_be(mpz_class(1), SCALAR_BYTES));
    for (const auto& a : p.coeffs) w.raw(to_bytes_be(a, SCALAR_BYTES));
}

inline SiffPolynomial parse(ByteReader& r) {
    uint16_t count = r.u16();
    if (count < 2) throw Malformed("SIFF polynomial needs at least degree 1");
    mpz_class lead = from_bytes_be(r.raw(SCALAR_BYTES));
    if (lead != 1) throw Malformed("SIFF polynomial must be monic");
    SiffPolynomial p;
    p.modulus = Scalar::modulus();
    p.coeffs.reserve(count - 1);
    for (uint16_t i = 1; i < count; ++i) {
        mpz_class a = from_bytes_be(r.raw(SCALAR_BYTES));
        if (a >= p.modulus) throw Malformed("SIFF coefficient out of range");
        p.coeffs.push_back(std::move(a));
    }
    return p;
}

}  // namespace siff
}  // namespace tsub
