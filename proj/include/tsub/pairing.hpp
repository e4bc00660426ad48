#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "tsub/bigint.hpp"
#include "tsub/errors.hpp"

// Type-1 (symmetric) pairing over the supersingular curve E: y^2 = x^3 + x
// on F_p with p ≡ 3 (mod 4) and embedding degree 2.
//
//   #E(F_p) = p + 1 = h * r,   r = 2^159 + 2^107 + 1 (prime, 160 bits)
//   G1 = order-r subgroup of E(F_p)
//   GT = order-r subgroup of F_{p^2}^*,  F_{p^2} = F_p[i]/(i^2 + 1)
//
// The map is the reduced Tate pairing composed with the distortion map
// phi(x, y) = (-x, i*y):  e(P, Q) = f_{r,P}(phi(Q))^((p^2-1)/r), which is
// bilinear and non-degenerate on G1 x G1.
//
// p was chosen 510 bits so an x-coordinate plus one parity bit fits exactly
// 64 bytes and an F_{p^2} element fits exactly 128 bytes.
namespace tsub::pairing {

inline const mpz_class& field_p() {
    static const mpz_class p(
        "0x20000000000002000000000000000000000000004000000000000000000000000000000000000000"
        "000000e400000000000e40000000000000000000000001c7");
    return p;
}

inline const mpz_class& group_r() {
    static const mpz_class r("0x8000000000000800000000000000000000000001");
    return r;
}

// (p + 1) / r; also the exponent of the second final-exponentiation stage
inline const mpz_class& cofactor_h() {
    static const mpz_class h(
        "0x40000000000000000000000000000000000000000000000000000000000000000000000000000000"
        "000001c8");
    return h;
}

// ---------------------------------------------------------------------------
// F_{p^2} = F_p[i] / (i^2 + 1)
// ---------------------------------------------------------------------------
struct Fp2 {
    mpz_class a;  // real part
    mpz_class b;  // coefficient of i

    static Fp2 one() { return {1, 0}; }
    bool is_one() const { return a == 1 && b == 0; }
    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const Fp2& o) const { return a == o.a && b == o.b; }
};

inline Fp2 fp2_mul(const Fp2& x, const Fp2& y) {
    const mpz_class& p = field_p();
    // Karatsuba: (a+bi)(c+di) = (ac - bd) + ((a+b)(c+d) - ac - bd) i
    mpz_class ac = x.a * y.a;
    mpz_class bd = x.b * y.b;
    mpz_class cross = (x.a + x.b) * (y.a + y.b) - ac - bd;
    return {mod_of(ac - bd, p), mod_of(cross, p)};
}

inline Fp2 fp2_sqr(const Fp2& x) {
    const mpz_class& p = field_p();
    // (a+bi)^2 = (a+b)(a-b) + 2ab i
    mpz_class re = (x.a + x.b) * (x.a - x.b);
    mpz_class im = 2 * x.a * x.b;
    return {mod_of(re, p), mod_of(im, p)};
}

inline Fp2 fp2_conj(const Fp2& x) {
    const mpz_class& p = field_p();
    return {x.a, x.b == 0 ? mpz_class(0) : mpz_class(p - x.b)};
}

inline Fp2 fp2_inv(const Fp2& x) {
    const mpz_class& p = field_p();
    // 1/(a+bi) = (a-bi) / (a^2+b^2)
    mpz_class norm = mod_of(x.a * x.a + x.b * x.b, p);
    mpz_class ninv = mod_inverse(norm, p);
    return {mod_mul(x.a, ninv, p), mod_of(-(x.b * ninv), p)};
}

inline Fp2 fp2_pow(Fp2 base, const mpz_class& e) {
    Fp2 acc = Fp2::one();
    const size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (mpz_sgn(e.get_mpz_t()) == 0) return acc;
    for (size_t i = nbits; i-- > 0;) {
        acc = fp2_sqr(acc);
        if (mpz_tstbit(e.get_mpz_t(), i)) acc = fp2_mul(acc, base);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// E(F_p): y^2 = x^3 + x
// ---------------------------------------------------------------------------
struct PointAffine {
    mpz_class x;
    mpz_class y;
    bool inf = true;

    static PointAffine infinity() { return {}; }
    bool operator==(const PointAffine& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
};

inline bool on_curve(const PointAffine& pt) {
    if (pt.inf) return true;
    const mpz_class& p = field_p();
    mpz_class lhs = mod_mul(pt.y, pt.y, p);
    mpz_class rhs = mod_of(pt.x * pt.x * pt.x + pt.x, p);
    return lhs == rhs;
}

inline PointAffine point_neg(const PointAffine& pt) {
    if (pt.inf) return pt;
    const mpz_class& p = field_p();
    return {pt.x, pt.y == 0 ? mpz_class(0) : mpz_class(p - pt.y), false};
}

inline PointAffine point_add(const PointAffine& P, const PointAffine& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    const mpz_class& p = field_p();
    mpz_class lambda;
    if (P.x == Q.x) {
        if (mod_of(P.y + Q.y, p) == 0) return PointAffine::infinity();
        // doubling: lambda = (3x^2 + 1) / 2y
        lambda = mod_mul(3 * P.x * P.x + 1, mod_inverse(mod_of(2 * P.y, p), p), p);
    } else {
        lambda = mod_mul(Q.y - P.y + p, mod_inverse(mod_of(Q.x - P.x, p), p), p);
    }
    mpz_class x3 = mod_of(lambda * lambda - P.x - Q.x, p);
    mpz_class y3 = mod_of(lambda * (P.x - x3) - P.y, p);
    return {x3, y3, false};
}

// Jacobian coordinates for scalar multiplication (X/Z^2, Y/Z^3), a = 1, b = 0.
struct PointJac {
    mpz_class X, Y, Z;  // Z == 0 encodes infinity
};

inline PointJac jac_from_affine(const PointAffine& pt) {
    if (pt.inf) return {1, 1, 0};
    return {pt.x, pt.y, 1};
}

inline PointJac jac_double(const PointJac& P) {
    if (P.Z == 0 || P.Y == 0) return {1, 1, 0};
    const mpz_class& p = field_p();
    mpz_class Y2 = mod_mul(P.Y, P.Y, p);
    mpz_class S = mod_of(4 * P.X * Y2, p);
    mpz_class Z2 = mod_mul(P.Z, P.Z, p);
    mpz_class M = mod_of(3 * P.X * P.X + Z2 * Z2, p);  // a = 1
    mpz_class X3 = mod_of(M * M - 2 * S, p);
    mpz_class Y3 = mod_of(M * (S - X3) - 8 * Y2 * Y2, p);
    mpz_class Z3 = mod_of(2 * P.Y * P.Z, p);
    return {X3, Y3, Z3};
}

inline PointJac jac_add_affine(const PointJac& P, const PointAffine& Q) {
    if (Q.inf) return P;
    if (P.Z == 0) return jac_from_affine(Q);
    const mpz_class& p = field_p();
    mpz_class Z2 = mod_mul(P.Z, P.Z, p);
    mpz_class U2 = mod_mul(Q.x, Z2, p);
    mpz_class S2 = mod_of(Q.y * Z2 * P.Z, p);
    if (U2 == P.X) {
        if (S2 == P.Y) return jac_double(P);
        return {1, 1, 0};
    }
    mpz_class H = mod_of(U2 - P.X, p);
    mpz_class R = mod_of(S2 - P.Y, p);
    mpz_class H2 = mod_mul(H, H, p);
    mpz_class H3 = mod_mul(H2, H, p);
    mpz_class X3 = mod_of(R * R - H3 - 2 * P.X * H2, p);
    mpz_class Y3 = mod_of(R * (P.X * H2 - X3) - P.Y * H3, p);
    mpz_class Z3 = mod_mul(P.Z, H, p);
    return {X3, Y3, Z3};
}

inline PointAffine jac_to_affine(const PointJac& P) {
    if (P.Z == 0) return PointAffine::infinity();
    const mpz_class& p = field_p();
    mpz_class zi = mod_inverse(P.Z, p);
    mpz_class zi2 = mod_mul(zi, zi, p);
    return {mod_mul(P.X, zi2, p), mod_of(P.Y * zi2 * zi, p), false};
}

inline PointAffine point_mul(const PointAffine& base, const mpz_class& k) {
    if (base.inf || k == 0) return PointAffine::infinity();
    PointJac acc{1, 1, 0};
    const size_t nbits = mpz_sizeinbase(k.get_mpz_t(), 2);
    for (size_t i = nbits; i-- > 0;) {
        acc = jac_double(acc);
        if (mpz_tstbit(k.get_mpz_t(), i)) acc = jac_add_affine(acc, base);
    }
    return jac_to_affine(acc);
}

// Square root for p ≡ 3 (mod 4); empty result if a is a non-residue.
inline bool sqrt_mod_p(const mpz_class& a, mpz_class& out) {
    const mpz_class& p = field_p();
    static const mpz_class e = (field_p() + 1) / 4;
    out = mod_pow(a, e, p);
    return mod_mul(out, out, p) == mod_of(a, p);
}

// Fixed base point of order r (deterministically derived; y even).
inline const PointAffine& base_point() {
    static const PointAffine g = [] {
        PointAffine pt{
            mpz_class("0xe88a7af09ad5af25fcbc1753554e76bfe190f79a3e01ef04e0b10a91caaa4b9b"
                      "e4748a04c68e5a2256921463a71849e98ed6b02642f29eef8dd5e5c97eb5f90"),
            mpz_class("0xdef4950cad645eddbb200f9ccb71cad1232907512400418f92ceb1446be859be"
                      "eea601cdeba86d7311853fe7261264624b8f41b7e060c3fc226f25860265998"),
            false};
        if (!on_curve(pt)) throw Error(Errc::io_error, "pairing base point corrupt");
        return pt;
    }();
    return g;
}

// Miller loop for the distorted Tate pairing: accumulates the tangent/chord
// lines of the double-and-add chain for [r]P, each evaluated at
// phi(Q) = (-xQ, i*yQ). Vertical lines land in F_p and are erased by the
// final exponentiation, so they are skipped.
inline Fp2 miller_loop(const PointAffine& P, const PointAffine& Q) {
    const mpz_class& p = field_p();
    const mpz_class& r = group_r();

    Fp2 f = Fp2::one();
    PointAffine T = P;
    const size_t nbits = mpz_sizeinbase(r.get_mpz_t(), 2);

    for (size_t i = nbits - 1; i-- > 0;) {
        f = fp2_sqr(f);
        if (!T.inf) {
            if (T.y == 0) {
                // tangent at a 2-torsion point is vertical
                T = PointAffine::infinity();
            } else {
                mpz_class lambda =
                    mod_mul(3 * T.x * T.x + 1, mod_inverse(mod_of(2 * T.y, p), p), p);
                // line l(X,Y) = Y - yT - lambda (X - xT) at (-xQ, i yQ)
                Fp2 l{mod_of(lambda * (Q.x + T.x) - T.y, p), Q.y};
                f = fp2_mul(f, l);
                T = point_add(T, T);
            }
        }
        if (mpz_tstbit(r.get_mpz_t(), i)) {
            if (T.inf) {
                T = P;
            } else if (T.x == P.x) {
                // T == -P: chord is the vertical through P (skipped);
                // T == P cannot occur for P of prime order r mid-loop.
                T = point_add(T, P);
            } else {
                mpz_class lambda =
                    mod_mul(P.y - T.y + p, mod_inverse(mod_of(P.x - T.x, p), p), p);
                Fp2 l{mod_of(lambda * (Q.x + T.x) - T.y, p), Q.y};
                f = fp2_mul(f, l);
                T = point_add(T, P);
            }
        }
    }
    return f;
}

// f^((p^2-1)/r) = (conj(f)/f)^h, since (p^2-1)/r = (p-1) * h and f^p = conj(f).
inline Fp2 final_exponentiation(const Fp2& f) {
    Fp2 t = fp2_mul(fp2_conj(f), fp2_inv(f));
    return fp2_pow(t, cofactor_h());
}

inline Fp2 tate_pairing(const PointAffine& P, const PointAffine& Q) {
    if (P.inf || Q.inf) return Fp2::one();
    return final_exponentiation(miller_loop(P, Q));
}

}  // namespace tsub::pairing
