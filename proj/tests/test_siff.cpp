#include <catch2/catch_amalgamated.hpp>

#include "tsub/bytes.hpp"
#include "tsub/siff.hpp"

using namespace tsub;

TEST_CASE("single root expands to x + (K - r)") {
    mpz_class q = Scalar::modulus();
    mpz_class r = 12345, k = 777;
    SiffPolynomial p = siff::build({r}, k, q);
    REQUIRE(p.degree() == 1);
    REQUIRE(p.coeffs[0] == mod_of(k - r, q));
    REQUIRE(siff::eval(p, r) == k);
}

TEST_CASE("worked example over Z_7: roots {2,3}, K=5 gives x^2+2x+4") {
    SiffPolynomial p = siff::build({mpz_class(2), mpz_class(3)}, mpz_class(5), mpz_class(7));
    REQUIRE(p.degree() == 2);
    REQUIRE(p.coeffs[0] == 2);
    REQUIRE(p.coeffs[1] == 4);
    REQUIRE(siff::eval(p, mpz_class(2)) == 5);
    REQUIRE(siff::eval(p, mpz_class(3)) == 5);
    REQUIRE(siff::eval(p, mpz_class(0)) == 4);
}

TEST_CASE("full-field roots all evaluate to the key") {
    Drbg rng(31);
    for (int t = 0; t < 20; ++t) {
        std::vector<Scalar> roots;
        for (int i = 0; i < 4; ++i) roots.push_back(Scalar::random(rng));
        Scalar key = Scalar::random(rng);
        SiffPolynomial p = siff::build(roots, key);
        REQUIRE(p.degree() == 4);
        for (const Scalar& r : roots) REQUIRE(siff::eval(p, r) == key);
    }
}

TEST_CASE("non-roots never evaluate to the key") {
    Drbg rng(32);
    std::vector<Scalar> roots;
    for (int i = 0; i < 4; ++i) roots.push_back(Scalar::random(rng));
    Scalar key = Scalar::random(rng);
    SiffPolynomial p = siff::build(roots, key);
    for (int t = 0; t < 200; ++t) {
        Scalar x = Scalar::random(rng);
        bool is_root = std::any_of(roots.begin(), roots.end(),
                                   [&](const Scalar& r) { return r == x; });
        if (!is_root) REQUIRE_FALSE(siff::eval(p, x) == key);
    }
    // exact over a field: eval(x') = K + prod(x'-r_i) != K for any x' off the roots
    for (int small = 0; small < 10; ++small) {
        Scalar x(static_cast<unsigned long>(small));
        bool is_root = std::any_of(roots.begin(), roots.end(),
                                   [&](const Scalar& r) { return r == x; });
        REQUIRE(is_root == (siff::eval(p, x) == key));
    }
}

TEST_CASE("duplicate roots are rejected") {
    REQUIRE_THROWS_AS(siff::build({mpz_class(2), mpz_class(2)}, mpz_class(1), mpz_class(7)),
                      DuplicateRoot);
}

TEST_CASE("coefficients are a pure function of the sorted root set") {
    Drbg rng(33);
    std::vector<Scalar> roots;
    for (int i = 0; i < 5; ++i) roots.push_back(Scalar::random(rng));
    Scalar key = Scalar::random(rng);
    SiffPolynomial a = siff::build(roots, key);
    std::swap(roots[0], roots[3]);
    std::swap(roots[1], roots[4]);
    SiffPolynomial b = siff::build(roots, key);
    REQUIRE(a.coeffs == b.coeffs);
}

TEST_CASE("wire format keeps the explicit monic lead and roundtrips") {
    Drbg rng(34);
    std::vector<Scalar> roots;
    for (int i = 0; i < 4; ++i) roots.push_back(Scalar::random(rng));
    SiffPolynomial p = siff::build(roots, Scalar::random(rng));
    ByteWriter w;
    siff::serialize(p, w);
    REQUIRE(w.size() == 2 + 5 * SCALAR_BYTES);  // count + (n+1) scalars
    ByteReader r{ByteView{w.data()}};
    SiffPolynomial q = siff::parse(r);
    REQUIRE(r.done());
    REQUIRE(q.coeffs == p.coeffs);

    Bytes tampered = w.data();
    tampered[2] = 9;  // break the leading coefficient
    ByteReader tr{ByteView{tampered}};
    REQUIRE_THROWS_AS(siff::parse(tr), Malformed);
}
