#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "tsub/bigint.hpp"
#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"
#include "tsub/rng.hpp"

// Immediate privilege revocation: a degree-t polynomial u(x) is shared in the
// exponent. Every consumer holds one point of u; a broadcast header carries t
// further points. The t header points plus the consumer's own point
// interpolate u(0) = a_0 in the exponent, recovering the rekey secret k.
// Burning a revoked consumer's point into the header makes their own share
// useless (the Lagrange basis degenerates).
//
// The group is an independent prime-order subgroup of Z_p^*: exponents and
// share x-coordinates live mod s (the subgroup order), group elements mod p.
namespace tsub::revocation {

struct Group {
    mpz_class p;  // prime modulus
    mpz_class s;  // prime order of the subgroup generated by g
    mpz_class g;

    size_t p_bytes() const { return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8; }
    size_t s_bytes() const { return (mpz_sizeinbase(s.get_mpz_t(), 2) + 7) / 8; }

    // p = 2s + 1 safe prime, 256 bits; g = 4 generates the order-s
    // quadratic-residue subgroup.
    static const Group& standard() {
        static const Group grp{
            mpz_class("0xffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff72ef"),
            mpz_class("0x7fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffb977"),
            mpz_class(4)};
        return grp;
    }
};

struct Share {
    mpz_class x;    // mod s
    mpz_class ux;   // u(x) mod s
};

struct Setup {
    Group group;
    unsigned degree = 0;                 // t
    unsigned n_max = 0;                  // issued-share capacity
    std::vector<mpz_class> coeffs;       // a_0..a_t mod s
    std::vector<Share> pool;             // t reserved broadcast points
    std::vector<std::pair<std::string, Share>> issued;  // consumer -> share

    mpz_class eval_u(const mpz_class& x) const {
        mpz_class acc = 0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = mod_of(acc * x + coeffs[i], group.s);
        return acc;
    }

    bool x_in_use(const mpz_class& x) const {
        for (const auto& pt : pool)
            if (pt.x == x) return true;
        for (const auto& [id, sh] : issued)
            if (sh.x == x) return true;
        return false;
    }

    const Share* share_of(const std::string& consumer) const {
        for (const auto& [id, sh] : issued)
            if (id == consumer) return &sh;
        return nullptr;
    }
};

struct Header {
    mpz_class u_val;                              // U = k * g^{a_0 r}
    mpz_class v_val;                              // V = g^r
    std::vector<std::pair<mpz_class, mpz_class>> points;   // E: (x_i, g^{r u(x_i)})
    std::vector<mpz_class> partial_lagrange;               // lambda'_k mod s
};

inline Setup setup(unsigned degree, unsigned n_max, Drbg& rng, const Group& group = Group::standard()) {
    if (degree < 1) throw InvalidRange("revocation polynomial degree must be >= 1");
    if (mpz_class(n_max) + degree >= group.s)
        throw InvalidRange("capacity exceeds the share space");
    Setup st;
    st.group = group;
    st.degree = degree;
    st.n_max = n_max;
    st.coeffs.reserve(degree + 1);
    for (unsigned i = 0; i < degree; ++i) st.coeffs.push_back(draw_mod(rng, group.s));
    st.coeffs.push_back(draw_nonzero(rng, group.s));  // leading coefficient != 0
    st.pool.reserve(degree);
    for (unsigned i = 0; i < degree; ++i) {
        mpz_class x;
        do x = draw_nonzero(rng, group.s);
        while (st.x_in_use(x));
        st.pool.push_back({x, st.eval_u(x)});
    }
    return st;
}

inline Share issue_share(Setup& st, const std::string& consumer, Drbg& rng) {
    if (st.issued.size() >= st.n_max)
        throw PoolExhausted("issued-share capacity reached");
    if (st.share_of(consumer) != nullptr)
        throw DuplicateConsumer("consumer already holds a share: " + consumer);
    mpz_class x;
    do x = draw_nonzero(rng, st.group.s);
    while (st.x_in_use(x));
    Share sh{x, st.eval_u(x)};
    st.issued.emplace_back(consumer, sh);
    return sh;
}

// lambda'_k = prod_{j != k} x_j / (x_j - x_k) over E's x-coordinates
inline std::vector<mpz_class> partial_lagrange(const std::vector<mpz_class>& xs,
                                               const mpz_class& s) {
    std::vector<mpz_class> out;
    out.reserve(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) {
        mpz_class num = 1, den = 1;
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == k) continue;
            num = mod_mul(num, xs[j], s);
            den = mod_mul(den, mod_of(xs[j] - xs[k], s), s);
        }
        out.push_back(mod_mul(num, mod_inverse(den, s), s));
    }
    return out;
}

inline mpz_class random_rekey(Drbg& rng, const Group& group = Group::standard()) {
    return draw_nonzero(rng, group.p);
}

// E carries the revoked consumers' shares, padded to exactly t entries with
// reserved pool points.
inline Header make_header(const Setup& st, const std::vector<std::string>& revoked,
                          const mpz_class& rekey, Drbg& rng, mpz_class* debug_r = nullptr) {
    if (revoked.size() > st.degree)
        throw TooManyRevoked("revocation pattern larger than polynomial degree");
    std::vector<Share> points;
    points.reserve(st.degree);
    for (size_t i = 0; i < revoked.size(); ++i) {
        for (size_t j = i + 1; j < revoked.size(); ++j)
            if (revoked[i] == revoked[j])
                throw DuplicateConsumer("consumer listed twice in the revocation set: " +
                                        revoked[i]);
        const Share* sh = st.share_of(revoked[i]);
        if (sh == nullptr) throw ParseError("cannot revoke unknown consumer: " + revoked[i]);
        points.push_back(*sh);
    }
    for (size_t i = 0; points.size() < st.degree; ++i) points.push_back(st.pool.at(i));

    mpz_class r = draw_nonzero(rng, st.group.s);
    if (debug_r != nullptr) *debug_r = r;

    Header hdr;
    hdr.u_val = mod_mul(mod_of(rekey, st.group.p),
                        mod_pow(st.group.g, mod_mul(st.coeffs[0], r, st.group.s), st.group.p),
                        st.group.p);
    hdr.v_val = mod_pow(st.group.g, r, st.group.p);
    std::vector<mpz_class> xs;
    xs.reserve(points.size());
    for (const Share& sh : points) {
        hdr.points.emplace_back(sh.x, mod_pow(st.group.g, mod_mul(r, sh.ux, st.group.s), st.group.p));
        xs.push_back(sh.x);
    }
    hdr.partial_lagrange = partial_lagrange(xs, st.group.s);
    return hdr;
}

// lambda_k = lambda'_k * x_u/(x_u - x_k);  delta_1 = prod Y_k^{lambda_k}
// lambda_u = prod x_k/(x_k - x_u);         delta_2 = V^{u(x_u) lambda_u}
// k = U / (delta_1 delta_2)
inline mpz_class recover_key(const Header& hdr, const Share& share,
                             const Group& group = Group::standard()) {
    const mpz_class& p = group.p;
    const mpz_class& s = group.s;
    if (hdr.points.size() != hdr.partial_lagrange.size())
        throw Malformed("revocation header is inconsistent");

    mpz_class delta1 = 1;
    mpz_class lambda_u = 1;
    for (size_t k = 0; k < hdr.points.size(); ++k) {
        const auto& [xk, yk] = hdr.points[k];
        mpz_class diff = mod_of(share.x - xk, s);
        if (diff == 0)
            throw DegenerateShare("share coincides with a burned broadcast point");
        mpz_class lambda_k =
            mod_mul(hdr.partial_lagrange[k], mod_mul(share.x, mod_inverse(diff, s), s), s);
        delta1 = mod_mul(delta1, mod_pow(yk, lambda_k, p), p);
        // factor of lambda_u: x_k / (x_k - x_u) = -x_k / (x_u - x_k)
        mpz_class num = mod_of(-xk, s);
        lambda_u = mod_mul(lambda_u, mod_mul(num, mod_inverse(diff, s), s), s);
    }
    mpz_class delta2 = mod_pow(hdr.v_val, mod_mul(share.ux, lambda_u, s), p);
    return mod_mul(hdr.u_val, mod_inverse(mod_mul(delta1, delta2, p), p), p);
}

inline Bytes rekey_bytes(const mpz_class& rekey, const Group& group = Group::standard()) {
    return to_bytes_be(rekey, group.p_bytes());
}

// --- wire formats -----------------------------------------------------------

// U || V || count t || repeated (x_i, Y_i) || repeated lambda'_k
inline void serialize_header(const Header& hdr, const Group& group, ByteWriter& w) {
    w.raw(as_bytes("TSRH"));
    w.u8(1);
    w.raw(to_bytes_be(hdr.u_val, group.p_bytes()));
    w.raw(to_bytes_be(hdr.v_val, group.p_bytes()));
    w.u16(static_cast<uint16_t>(hdr.points.size()));
    for (const auto& [x, y] : hdr.points) {
        w.raw(to_bytes_be(x, group.s_bytes()));
        w.raw(to_bytes_be(y, group.p_bytes()));
    }
    for (const auto& l : hdr.partial_lagrange) w.raw(to_bytes_be(l, group.s_bytes()));
}

inline Header parse_header(ByteReader& r, const Group& group = Group::standard()) {
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSRH")) throw Malformed("not a TSRH blob");
    if (r.u8() != 1) throw Malformed("unsupported TSRH version");
    Header hdr;
    hdr.u_val = from_bytes_be(r.raw(group.p_bytes()));
    hdr.v_val = from_bytes_be(r.raw(group.p_bytes()));
    uint16_t n = r.u16();
    hdr.points.reserve(n);
    for (uint16_t i = 0; i < n; ++i) {
        mpz_class x = from_bytes_be(r.raw(group.s_bytes()));
        mpz_class y = from_bytes_be(r.raw(group.p_bytes()));
        hdr.points.emplace_back(std::move(x), std::move(y));
    }
    hdr.partial_lagrange.reserve(n);
    for (uint16_t i = 0; i < n; ++i)
        hdr.partial_lagrange.push_back(from_bytes_be(r.raw(group.s_bytes())));
    return hdr;
}

inline void serialize_setup(const Setup& st, ByteWriter& w) {
    w.raw(as_bytes("TSRS"));
    w.u8(1);
    w.u16(static_cast<uint16_t>(st.degree));
    w.u32(st.n_max);
    for (const auto& c : st.coeffs) w.raw(to_bytes_be(c, st.group.s_bytes()));
    for (const auto& pt : st.pool) {
        w.raw(to_bytes_be(pt.x, st.group.s_bytes()));
        w.raw(to_bytes_be(pt.ux, st.group.s_bytes()));
    }
    w.u32(static_cast<uint32_t>(st.issued.size()));
    for (const auto& [id, sh] : st.issued) {
        w.str(id);
        w.raw(to_bytes_be(sh.x, st.group.s_bytes()));
        w.raw(to_bytes_be(sh.ux, st.group.s_bytes()));
    }
}

inline Setup parse_setup(ByteReader& r, const Group& group = Group::standard()) {
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSRS")) throw Malformed("not a TSRS blob");
    if (r.u8() != 1) throw Malformed("unsupported TSRS version");
    Setup st;
    st.group = group;
    st.degree = r.u16();
    st.n_max = r.u32();
    st.coeffs.reserve(st.degree + 1);
    for (unsigned i = 0; i <= st.degree; ++i)
        st.coeffs.push_back(from_bytes_be(r.raw(group.s_bytes())));
    st.pool.reserve(st.degree);
    for (unsigned i = 0; i < st.degree; ++i) {
        mpz_class x = from_bytes_be(r.raw(group.s_bytes()));
        mpz_class ux = from_bytes_be(r.raw(group.s_bytes()));
        st.pool.push_back({std::move(x), std::move(ux)});
    }
    uint32_t n = r.u32();
    st.issued.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        std::string id = r.str();
        mpz_class x = from_bytes_be(r.raw(group.s_bytes()));
        mpz_class ux = from_bytes_be(r.raw(group.s_bytes()));
        st.issued.emplace_back(std::move(id), Share{std::move(x), std::move(ux)});
    }
    return st;
}

inline void serialize_share(const Share& sh, const Group& group, ByteWriter& w) {
    w.raw(as_bytes("TSSH"));
    w.u8(1);
    w.raw(to_bytes_be(sh.x, group.s_bytes()));
    w.raw(to_bytes_be(sh.ux, group.s_bytes()));
}

inline Share parse_share(ByteReader& r, const Group& group = Group::standard()) {
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSSH")) throw Malformed("not a TSSH blob");
    if (r.u8() != 1) throw Malformed("unsupported TSSH version");
    Share sh;
    sh.x = from_bytes_be(r.raw(group.s_bytes()));
    sh.ux = from_bytes_be(r.raw(group.s_bytes()));
    return sh;
}

}  // namespace tsub::revocation
