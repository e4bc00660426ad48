#include <catch2/catch_amalgamated.hpp>

#include "tsub/revocation.hpp"

using namespace tsub;
using namespace tsub::revocation;

namespace {

// p = 2063 = 2*1031 + 1 (both prime); 4 generates the order-1031 subgroup
const Group kToyGroup{mpz_class(2063), mpz_class(1031), mpz_class(4)};

// Clear-text Lagrange interpolation at 0 over Z_s, written directly from the
// basis formula; independent of the module's partial/split evaluation.
mpz_class interpolate_at_zero(const std::vector<std::pair<mpz_class, mpz_class>>& pts,
                              const mpz_class& s) {
    mpz_class acc = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        mpz_class num = 1, den = 1;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            num = mod_mul(num, pts[j].first, s);
            den = mod_mul(den, mod_of(pts[j].first - pts[i].first, s), s);
        }
        acc = mod_of(acc + pts[i].second * mod_mul(num, mod_inverse(den, s), s), s);
    }
    return acc;
}

}  // namespace

TEST_CASE("setup draws a degree-t polynomial and a distinct point pool") {
    Drbg rng(41);
    auto st = setup(6, 20, rng, kToyGroup);
    REQUIRE(st.coeffs.size() == 7);
    REQUIRE(st.coeffs.back() != 0);
    REQUIRE(st.pool.size() == 6);
    for (size_t i = 0; i < st.pool.size(); ++i)
        for (size_t j = i + 1; j < st.pool.size(); ++j)
            REQUIRE(st.pool[i].x != st.pool[j].x);
    for (const auto& pt : st.pool) REQUIRE(st.eval_u(pt.x) == pt.ux);
}

TEST_CASE("pooled points plus one issued share interpolate to a_0 in the clear") {
    Drbg rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto st = setup(4, 10, rng, kToyGroup);
        Share sh = issue_share(st, "alice", rng);
        std::vector<std::pair<mpz_class, mpz_class>> pts;
        for (const auto& pt : st.pool) pts.emplace_back(pt.x, pt.ux);
        pts.emplace_back(sh.x, sh.ux);
        REQUIRE(interpolate_at_zero(pts, st.group.s) == st.coeffs[0]);
    }
}

TEST_CASE("share issuance enforces capacity, uniqueness and consistency") {
    Drbg rng(43);
    auto st = setup(3, 5, rng, kToyGroup);
    std::vector<Share> shares;
    for (int i = 0; i < 5; ++i) {
        Share sh = issue_share(st, "c" + std::to_string(i), rng);
        REQUIRE(st.eval_u(sh.x) == sh.ux);
        for (const auto& other : shares) REQUIRE(other.x != sh.x);
        shares.push_back(sh);
    }
    REQUIRE_THROWS_AS(issue_share(st, "c5", rng), PoolExhausted);
    auto st2 = setup(3, 5, rng, kToyGroup);
    issue_share(st2, "dup", rng);
    REQUIRE_THROWS_AS(issue_share(st2, "dup", rng), DuplicateConsumer);
}

TEST_CASE("empty revocation broadcasts the reserved pool and everyone recovers") {
    Drbg rng(44);
    auto st = setup(5, 10, rng, kToyGroup);
    std::vector<Share> shares;
    for (int i = 0; i < 8; ++i) shares.push_back(issue_share(st, "c" + std::to_string(i), rng));
    mpz_class k = random_rekey(rng, kToyGroup);
    auto hdr = make_header(st, {}, k, rng);
    REQUIRE(hdr.points.size() == 5);
    for (size_t i = 0; i < st.pool.size(); ++i) REQUIRE(hdr.points[i].first == st.pool[i].x);
    for (const auto& sh : shares) REQUIRE(recover_key(hdr, sh, kToyGroup) == k);
}

TEST_CASE("revoked shares are burned; everyone else still recovers") {
    Drbg rng(45);
    auto st = setup(4, 12, rng, kToyGroup);
    std::vector<Share> shares;
    for (int i = 0; i < 9; ++i) shares.push_back(issue_share(st, "c" + std::to_string(i), rng));
    mpz_class k = random_rekey(rng, kToyGroup);
    auto hdr = make_header(st, {"c2"}, k, rng);
    bool found = false;
    for (const auto& [x, y] : hdr.points) found = found || x == shares[2].x;
    REQUIRE(found);
    for (int i = 0; i < 9; ++i) {
        if (i == 2)
            REQUIRE_THROWS_AS(recover_key(hdr, shares[i], kToyGroup), DegenerateShare);
        else
            REQUIRE(recover_key(hdr, shares[i], kToyGroup) == k);
    }
    REQUIRE_THROWS_AS(make_header(st, {"c0", "c1", "c3", "c4", "c5"}, k, rng), TooManyRevoked);
    REQUIRE_THROWS_AS(make_header(st, {"nobody"}, k, rng), ParseError);
    REQUIRE_THROWS_AS(make_header(st, {"c0", "c0"}, k, rng), DuplicateConsumer);
}

TEST_CASE("partial Lagrange coefficients match the clear-text basis") {
    Drbg rng(46);
    const mpz_class& s = kToyGroup.s;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<mpz_class> xs;
        while (xs.size() < 5) {
            mpz_class x = draw_nonzero(rng, s);
            if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
        }
        auto lam = partial_lagrange(xs, s);
        for (size_t kk = 0; kk < xs.size(); ++kk) {
            mpz_class num = 1, den = 1;
            for (size_t j = 0; j < xs.size(); ++j) {
                if (j == kk) continue;
                num = mod_mul(num, xs[j], s);
                den = mod_mul(den, mod_of(xs[j] - xs[kk], s), s);
            }
            REQUIRE(lam[kk] == mod_mul(num, mod_inverse(den, s), s));
        }
    }
}

TEST_CASE("exponent-side interpolation equals g^(a_0 r)") {
    Drbg rng(47);
    auto st = setup(4, 10, rng, kToyGroup);
    Share sh = issue_share(st, "alice", rng);
    mpz_class k = random_rekey(rng, kToyGroup);
    mpz_class r;
    auto hdr = make_header(st, {}, k, rng, &r);
    // recompute delta_1 * delta_2 through recover_key's output:
    // U / recovered == delta_1 delta_2, and it must equal g^{a_0 r}
    mpz_class recovered = recover_key(hdr, sh, kToyGroup);
    mpz_class d1d2 = mod_mul(hdr.u_val, mod_inverse(recovered, kToyGroup.p), kToyGroup.p);
    mpz_class expect =
        mod_pow(kToyGroup.g, mod_mul(st.coeffs[0], r, kToyGroup.s), kToyGroup.p);
    REQUIRE(d1d2 == expect);
    REQUIRE(recovered == k);
}

TEST_CASE("clear-text equivalence across 100 toy instances") {
    Drbg rng(48);
    for (int trial = 0; trial < 100; ++trial) {
        auto st = setup(3, 6, rng, kToyGroup);
        Share sh = issue_share(st, "u", rng);
        mpz_class k = random_rekey(rng, kToyGroup);
        auto hdr = make_header(st, {}, k, rng);
        REQUIRE(recover_key(hdr, sh, kToyGroup) == k);
        std::vector<std::pair<mpz_class, mpz_class>> pts;
        for (const auto& pt : st.pool) pts.emplace_back(pt.x, pt.ux);
        pts.emplace_back(sh.x, sh.ux);
        REQUIRE(interpolate_at_zero(pts, st.group.s) == st.coeffs[0]);
    }
}

TEST_CASE("full-size group recovery") {
    Drbg rng(49);
    auto st = setup(8, 50, rng);
    std::vector<Share> shares;
    for (int i = 0; i < 12; ++i) shares.push_back(issue_share(st, "c" + std::to_string(i), rng));
    mpz_class k = random_rekey(rng);
    auto hdr = make_header(st, {"c1", "c4", "c9"}, k, rng);
    for (int i = 0; i < 12; ++i) {
        if (i == 1 || i == 4 || i == 9)
            REQUIRE_THROWS_AS(recover_key(hdr, shares[i]), DegenerateShare);
        else
            REQUIRE(recover_key(hdr, shares[i]) == k);
    }
}

TEST_CASE("a fabricated share off the polynomial recovers garbage") {
    Drbg rng(50);
    auto st = setup(4, 10, rng, kToyGroup);
    mpz_class k = random_rekey(rng, kToyGroup);
    auto hdr = make_header(st, {}, k, rng);
    int wrong = 0, total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Share fake{draw_nonzero(rng, kToyGroup.s), draw_nonzero(rng, kToyGroup.s)};
        if (st.x_in_use(fake.x) || st.eval_u(fake.x) == fake.ux) continue;  // would be honest
        ++total;
        if (recover_key(hdr, fake, kToyGroup) != k) ++wrong;
    }
    REQUIRE(total > 80);
    REQUIRE(wrong == total);
}

TEST_CASE("header, setup and share wire roundtrips") {
    Drbg rng(51);
    auto st = setup(8, 50, rng);
    Share sh = issue_share(st, "alice", rng);
    mpz_class k = random_rekey(rng);
    auto hdr = make_header(st, {"alice"}, k, rng);

    ByteWriter hw;
    serialize_header(hdr, st.group, hw);
    // fixed-width fields: U, V (32 B each) + t * (x 32 B + Y 32 B + lambda 32 B)
    REQUIRE(hw.size() == 4 + 1 + 2 + 2 * 32 + 8 * 96);
    ByteReader hr{ByteView{hw.data()}};
    Header hdr2 = parse_header(hr);
    hr.expect_done();
    REQUIRE(hdr2.u_val == hdr.u_val);
    REQUIRE(hdr2.v_val == hdr.v_val);
    REQUIRE(hdr2.points == hdr.points);
    REQUIRE(hdr2.partial_lagrange == hdr.partial_lagrange);

    ByteWriter sw;
    serialize_setup(st, sw);
    ByteReader sr{ByteView{sw.data()}};
    Setup st2 = parse_setup(sr);
    sr.expect_done();
    REQUIRE(st2.coeffs == st.coeffs);
    REQUIRE(st2.issued.size() == st.issued.size());
    Share sh2 = issue_share(st2, "bob", rng);
    REQUIRE(st2.eval_u(sh2.x) == sh2.ux);

    ByteWriter shw;
    serialize_share(sh, st.group, shw);
    ByteReader shr{ByteView{shw.data()}};
    Share back = parse_share(shr);
    shr.expect_done();
    REQUIRE(back.x == sh.x);
    REQUIRE(back.ux == sh.ux);
}
