#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corrmate/fuchsian.hpp"

using namespace corrmate;

namespace {

bool near(const SpherePoint& a, const SpherePoint& b, double tol = 1e-12) { return chordal_distance(a, b) <= tol; }

} // namespace

TEST_CASE("build_group rejects non-hyperbolic data") {
    CHECK_THROWS(build_group(1, 2));
    CHECK_THROWS(build_group(0, 5));
    CHECK_NOTHROW(build_group(3, 1));
}

TEST_CASE("geodesic endpoints") {
    GroupData g = build_group(4, 3);
    auto [u, v] = g.arc(2, 3);
    CHECK(std::abs(u - std::polar(1.0, 2 * kPi * (0.25 + 2.0 / 12))) < 1e-14);
    CHECK(std::abs(v - std::polar(1.0, 2 * kPi * (0.25 + 3.0 / 12))) < 1e-14);
    CHECK(std::abs(g.geodesic(2, 3).u() - u) < 1e-15);
    CHECK(std::abs(g.ell().u() - std::polar(1.0, kPi / 4)) < 1e-15);
    CHECK(g.ell().is_diameter());
}

TEST_CASE("(1,4): g_{1,1} sends 1 to 1 and i to -i") {
    GroupData g = build_group(1, 4);
    CHECK(near(g.generator(1, 1)(1.0), 1.0));
    CHECK(near(g.generator(1, 1)(Complex(0, 1)), Complex(0, -1)));
}

TEST_CASE("(4,3): rotational conjugation") {
    GroupData g = build_group(4, 3);
    MobiusMap mi = MobiusMap::rotation(Complex(0, 1));
    CHECK(g.generator(2, 1).distance(mi * g.generator(1, 1) * mi.inverse()) < 1e-12);
}

TEST_CASE("group invariants on the (n,p) grid") {
    for (int n = 1; n <= 5; ++n)
        for (int p = 1; p <= 8; ++p) {
            if (n * p < 3) continue;
            CAPTURE(n);
            CAPTURE(p);
            GroupData g = build_group(n, p);
            for (int s = 1; s <= p; ++s) {
                const MobiusMap& gs = g.generator(1, s);
                CHECK(std::abs(gs.det() - 1.0) < 1e-12);
                CHECK((gs * g.generator(1, p + 1 - s)).distance(MobiusMap::identity()) < 1e-12);
                // endpoints of C_{1,s} go to the endpoints of C_{1,p+1-s}, reversed
                auto [u, v] = g.arc(1, s);
                auto [u2, v2] = g.arc(1, p + 1 - s);
                CHECK(near(gs(u), v2, 1e-11));
                CHECK(near(gs(v), u2, 1e-11));
                for (int r = 1; r <= n; ++r) {
                    MobiusMap conj = g.rotation_power(r - 1) * gs * g.rotation_power(-(r - 1));
                    CHECK(g.generator(r, s).distance(conj) < 1e-12);
                }
            }
            if (p % 2 == 1) {
                const MobiusMap& mid = g.generator(1, (p + 1) / 2);
                CHECK((mid * mid).distance(MobiusMap::identity()) < 1e-12);
            }
        }
}

TEST_CASE("quotient signatures") {
    CHECK(quotient_signature(1, 6, false) == OrbifoldSignature{4, 0, 0, 0});
    CHECK(quotient_signature(3, 1, true) == OrbifoldSignature{1, 1, 1, 3});
    CHECK(quotient_signature(1, 5, false) == OrbifoldSignature{3, 1, 0, 0});
    for (int n = 1; n <= 5; ++n)
        for (int p = 1; p <= 8; ++p) {
            if (n * p < 3) continue;
            CHECK(quotient_signature(n, p, false).is_hyperbolic());
            CHECK(quotient_signature(n, p, true).is_hyperbolic());
        }
}

TEST_CASE("fractions") {
    CHECK(Fraction(2, -4) == Fraction(-1, 2));
    CHECK(Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6));
    CHECK(Fraction(3, 4) * Fraction(2, 3) == Fraction(1, 2));
    CHECK(Fraction(-1, 4) < Fraction(0));
}

TEST_CASE("orbifold_to_np") {
    CHECK(orbifold_to_np(1, 1, 1, 3) == GroupParameters{3, 1, 2});
    CHECK(orbifold_to_np(4, 0, 0, 0) == GroupParameters{1, 6, 5});
    CHECK(orbifold_to_np(2, 1, 1, 4) == GroupParameters{4, 3, 11});
    CHECK_THROWS(orbifold_to_np(1, 0, 0, 0));
    CHECK_THROWS(orbifold_to_np(2, 0, 0, 0)); // p = 2, n = 1
    CHECK_THROWS(orbifold_to_np(1, 1, 1, 2));
}

TEST_CASE("signature round trip") {
    for (int n : {1, 3, 4, 5, 6})
        for (int p = 1; p <= 9; ++p) {
            if (n * p < 3) continue;
            OrbifoldSignature sig = quotient_signature(n, p, true);
            int d2 = sig.order2_points;
            int d3 = sig.orderN_points;
            GroupParameters back = orbifold_to_np(sig.punctures, d2, d3, sig.order_value);
            CHECK(back == GroupParameters{n, p, n * p - 1});
        }
}

TEST_CASE("teich_dimension") {
    CHECK(teich_dimension(1, 6) == 1);
    CHECK(teich_dimension(3, 1) == 0);
    CHECK(teich_dimension(1, 5) == 1);
    for (int q = 2; q <= 5; ++q) {
        CHECK(teich_dimension(1, 2 * q) == q - 2);
        CHECK(teich_dimension(1, 2 * q + 1) == q - 1);
        CHECK(teich_dimension(3, 2 * q) == q - 1);
        CHECK(teich_dimension(4, 2 * q + 1) == q);
    }
}
