#pragma once

#include <gmpxx.h>

#include <string_view>

#include "tsub/bigint.hpp"
#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"
#include "tsub/hash.hpp"
#include "tsub/pairing.hpp"
#include "tsub/rng.hpp"

// Group arithmetic for the scheme: the scalar field Z_q (q = order of G1 and
// GT), the curve group G1 (written multiplicatively, as in the construction),
// the target group GT, the symmetric pairing, and canonical fixed-width
// encodings. All operations are pure; values are immutable once built.
namespace tsub {

inline constexpr size_t SCALAR_BYTES = 20;
inline constexpr size_t G1_BYTES = 64;
inline constexpr size_t GT_BYTES = 128;

class Scalar {
public:
    Scalar() : v_(0) {}
    explicit Scalar(unsigned long v) : v_(mod_of(mpz_class(v), modulus())) {}
    explicit Scalar(const mpz_class& v) : v_(mod_of(v, modulus())) {}

    static const mpz_class& modulus() { return pairing::group_r(); }

    static Scalar random(Drbg& rng) { return Scalar(draw_nonzero(rng, modulus())); }

    static Scalar from_bytes(ByteView b) {
        if (b.size() != SCALAR_BYTES) throw Malformed("scalar encoding must be 20 bytes");
        mpz_class v = from_bytes_be(b);
        if (v >= modulus()) throw Malformed("scalar encoding out of range");
        return Scalar(v);
    }

    Bytes to_bytes() const { return to_bytes_be(v_, SCALAR_BYTES); }

    Scalar operator+(const Scalar& o) const { return Scalar(v_ + o.v_); }
    Scalar operator-(const Scalar& o) const { return Scalar(v_ - o.v_ + modulus()); }
    Scalar operator*(const Scalar& o) const { return Scalar(v_ * o.v_); }
    Scalar negate() const { return Scalar(modulus() - v_); }
    Scalar inverse() const { return Scalar(mod_inverse(v_, modulus())); }

    bool is_zero() const { return v_ == 0; }
    bool operator==(const Scalar& o) const { return v_ == o.v_; }

    const mpz_class& value() const { return v_; }

private:
    mpz_class v_;
};

inline Scalar scalar_inverse(const Scalar& a) {
    if (a.is_zero()) throw ZeroInverse("scalar_inverse(0)");
    return a.inverse();
}

// SHA-256 of the input, read big-endian and reduced mod q; 0 maps to 1 so the
// output always lies in Z_q^*.
inline Scalar hash_to_scalar(ByteView data) {
    Digest d = sha256(data);
    mpz_class v = mod_of(from_bytes_be(ByteView{d.data(), d.size()}), Scalar::modulus());
    if (v == 0) v = 1;
    return Scalar(v);
}

inline Scalar hash_to_scalar(const Bytes& data) { return hash_to_scalar(ByteView{data}); }
inline Scalar hash_to_scalar(std::string_view s) { return hash_to_scalar(as_bytes(s)); }

class GTElement;

class G1Element {
public:
    G1Element() = default;  // identity

    static G1Element generator() { return G1Element(pairing::base_point()); }

    // group operation (multiplicative notation)
    G1Element operator*(const G1Element& o) const {
        return G1Element(pairing::point_add(pt_, o.pt_));
    }
    G1Element pow(const Scalar& e) const {
        return G1Element(pairing::point_mul(pt_, e.value()));
    }
    G1Element inverse() const { return G1Element(pairing::point_neg(pt_)); }

    bool is_identity() const { return pt_.inf; }
    bool operator==(const G1Element& o) const { return pt_ == o.pt_; }

    // 64 bytes: x-coordinate big-endian with the top bit carrying the parity
    // of y (p is 510 bits, so bit 511 is always clear in x). The identity,
    // which never appears in wire data, is the all-0xff block.
    Bytes to_bytes() const {
        if (pt_.inf) return Bytes(G1_BYTES, 0xff);
        Bytes out = to_bytes_be(pt_.x, G1_BYTES);
        if (mpz_odd_p(pt_.y.get_mpz_t())) out[0] |= 0x80;
        return out;
    }

    static G1Element from_bytes(ByteView b) {
        if (b.size() != G1_BYTES) throw Malformed("G1 encoding must be 64 bytes");
        bool all_ff = true;
        for (uint8_t x : b)
            if (x != 0xff) { all_ff = false; break; }
        if (all_ff) return G1Element();
        Bytes xb(b.begin(), b.end());
        bool odd = (xb[0] & 0x80) != 0;
        xb[0] &= 0x7f;
        mpz_class x = from_bytes_be(xb);
        if (x >= pairing::field_p()) throw Malformed("G1 x-coordinate out of range");
        mpz_class rhs = mod_of(x * x * x + x, pairing::field_p());
        mpz_class y;
        if (!pairing::sqrt_mod_p(rhs, y)) throw Malformed("G1 x-coordinate not on curve");
        if (mpz_odd_p(y.get_mpz_t()) != odd) y = pairing::field_p() - y;
        pairing::PointAffine pt{x, y, false};
        // order check: decoded points must lie in the prime-order subgroup
        if (!pairing::point_mul(pt, Scalar::modulus()).inf)
            throw Malformed("G1 point outside the prime-order subgroup");
        return G1Element(pt);
    }

    const pairing::PointAffine& point() const { return pt_; }

private:
    explicit G1Element(pairing::PointAffine pt) : pt_(std::move(pt)) {}
    pairing::PointAffine pt_;
};

class GTElement {
public:
    GTElement() : v_(pairing::Fp2::one()) {}

    static GTElement one() { return GTElement(); }

    GTElement operator*(const GTElement& o) const {
        return GTElement(pairing::fp2_mul(v_, o.v_));
    }
    GTElement operator/(const GTElement& o) const {
        return GTElement(pairing::fp2_mul(v_, pairing::fp2_inv(o.v_)));
    }
    GTElement inverse() const { return GTElement(pairing::fp2_inv(v_)); }
    GTElement pow(const Scalar& e) const { return GTElement(pairing::fp2_pow(v_, e.value())); }

    bool is_one() const { return v_.is_one(); }
    bool operator==(const GTElement& o) const { return v_ == o.v_; }

    // 128 bytes: both F_p coordinates, big-endian, 64 bytes each.
    Bytes to_bytes() const {
        Bytes out = to_bytes_be(v_.a, G1_BYTES);
        Bytes im = to_bytes_be(v_.b, G1_BYTES);
        out.insert(out.end(), im.begin(), im.end());
        return out;
    }

    static GTElement from_bytes(ByteView b) {
        if (b.size() != GT_BYTES) throw Malformed("GT encoding must be 128 bytes");
        pairing::Fp2 v{from_bytes_be(b.subspan(0, G1_BYTES)), from_bytes_be(b.subspan(G1_BYTES))};
        if (v.a >= pairing::field_p() || v.b >= pairing::field_p())
            throw Malformed("GT coordinate out of range");
        if (v.is_zero()) throw Malformed("GT encoding is zero");
        if (!pairing::fp2_pow(v, Scalar::modulus()).is_one())
            throw Malformed("GT element outside the order-q subgroup");
        return GTElement(v);
    }

    const pairing::Fp2& raw() const { return v_; }

private:
    explicit GTElement(pairing::Fp2 v) : v_(std::move(v)) {}
    friend GTElement pair(const G1Element&, const G1Element&);

    pairing::Fp2 v_;
};

inline GTElement pair(const G1Element& a, const G1Element& b) {
    return GTElement(pairing::tate_pairing(a.point(), b.point()));
}

// Maps a GT element into the scalar ring through its canonical encoding;
// used to turn the encryption random secret values into polynomial roots.
inline Scalar hash_gt_to_scalar(const GTElement& x) { return hash_to_scalar(x.to_bytes()); }

}  // namespace tsub
