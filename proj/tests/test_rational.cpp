#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corrmate/errors.hpp"
#include "corrmate/rational.hpp"

#include <algorithm>
#include <map>
#include <cstdio>
#include <random>
#include <string>

using namespace corrmate;

namespace {

// (z + 1/2)^3 / z^2
RationalMap hecke() { return RationalMap({0.125, 0.75, 1.5, 1.0}, {0.0, 0.0, 1.0}); }
// z + 1/(3 z^3)
RationalMap family_a2() { return RationalMap({1.0 / 3.0, 0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 1.0}); }

Complex rnd(std::mt19937_64& rng, double s = 2.0) {
    std::uniform_real_distribution<double> u(-s, s);
    return {u(rng), u(rng)};
}

const FiberPoint* find_point(const std::vector<FiberPoint>& f, SpherePoint z, double tol) {
    for (const auto& x : f)
        if (chordal_distance(x.point, z) < tol) return &x;
    return nullptr;
}

} // namespace

TEST_CASE("polynomial helpers") {
    Poly p = poly_from_roots({1.0, 2.0, Complex(0, 3)});
    CHECK(degree(p) == 3);
    CHECK(std::abs(poly_eval(p, 2.0)) < 1e-14);
    Poly q = deflate(p, 2.0);
    CHECK(degree(q) == 2);
    CHECK(std::abs(poly_eval(q, Complex(0, 3))) < 1e-12);
    // backward recurrence for |a| > 1
    Poly r = deflate(p, Complex(0, 3));
    CHECK(std::abs(poly_eval(r, 1.0)) < 1e-12);
    CHECK(std::abs(poly_eval(r, 2.0)) < 1e-12);
    CHECK(degree(poly_trim({1.0, 2.0, 1e-20}, 1e-15)) == 1);
    CHECK(degree(Poly{0.0, 0.0}) == -1);
    CHECK(poly_pow({1.0, 1.0}, 3) == Poly{1.0, 3.0, 3.0, 1.0});
}

TEST_CASE("find_roots with multiplicity") {
    auto roots = find_roots(poly_mul(poly_pow({-1.0, 1.0}, 2), {0.125, 1.0}));
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(), [](auto& a, auto& b) { return a.value.real() < b.value.real(); });
    CHECK(roots[0].multiplicity == 1);
    CHECK(std::abs(roots[0].value + 0.125) < 1e-12);
    CHECK(roots[1].multiplicity == 2);
    CHECK(std::abs(roots[1].value - 1.0) < 1e-10);

    // a triple root: eigenvalues spread by about eps^(1/3)
    auto triple = find_roots(poly_pow({0.5, 1.0}, 3));
    REQUIRE(triple.size() == 1);
    CHECK(triple[0].multiplicity == 3);
    CHECK(std::abs(triple[0].value + 0.5) < 1e-10);

    auto z3 = find_roots({0.0, 0.0, 0.0, 1.0});
    REQUIRE(z3.size() == 1);
    CHECK(z3[0].multiplicity == 3);
    CHECK(z3[0].value == Complex(0.0));
    CHECK_THROWS_AS(find_roots({0.0}), DegenerateError);
    CHECK(find_roots({2.0}).empty());
}

TEST_CASE("find_roots on random polynomials") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> rs;
        int deg = 2 + trial % 12;
        for (int i = 0; i < deg; ++i) rs.push_back(rnd(rng));
        auto found = find_roots_flat(poly_from_roots(rs));
        REQUIRE(found.size() == rs.size());
        for (const auto& r : rs) {
            double best = 1e9;
            for (const auto& f : found) best = std::min(best, std::abs(f - r));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("normalization and coprimality") {
    RationalMap r({2.0, 4.0}, {0.0, 2.0});
    CHECK(r.den() == Poly{0.0, 1.0});
    CHECK(r.num() == Poly{1.0, 2.0});
    CHECK(RationalMap::polynomial({0.0, -3.0, 0.0, 1.0}).is_polynomial());
    CHECK_THROWS_AS(RationalMap({-1.0, 0.0, 1.0}, {-1.0, 1.0}), DegenerateError);
    CHECK_THROWS_AS(RationalMap({1.0}, {0.0}), DegenerateError);
}

TEST_CASE("eval") {
    RationalMap R = hecke();
    CHECK(approx_equal(R(1.0), 27.0 / 8.0, 1e-14));
    CHECK(R(0.0).is_infinite());
    CHECK(R(SpherePoint::infinity()).is_infinite());
    CHECK(family_a2()(SpherePoint::infinity()).is_infinite());
    // reciprocal chart agrees with the direct formula
    Complex big(3e8, -4e8);
    Complex direct = big + 0.5 * 3.0 + 0.75 / big;
    CHECK(std::abs(R(big).value() / direct - 1.0) < 1e-12);
    RationalMap eq({1.0, 2.0}, {3.0, 1.0});
    CHECK(approx_equal(eq(SpherePoint::infinity()), 2.0));
    CHECK(approx_equal(RationalMap({1.0}, {0.0, 1.0})(SpherePoint::infinity()), 0.0));
}

TEST_CASE("derivatives match finite differences") {
    std::mt19937_64 rng(2);
    for (const RationalMap& R : {hecke(), family_a2(), RationalMap({1.0, Complex(0, 2), 3.0}, {Complex(1, 1), 0.5, 1.0})}) {
        for (int i = 0; i < 100; ++i) {
            Complex z = rnd(rng);
            if (std::abs(poly_eval(R.den(), z)) < 0.05) continue;
            const double h = 1e-6;
            Complex fd = (R(z + h).value() - R(z - h).value()) / (2 * h);
            Complex an = R.derivative(z).value();
            CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
            CHECK(std::abs(R.derivative_k(z, 1) - an) <= 1e-10 * std::max(1.0, std::abs(an)));
            // second derivative by differencing the first
            Complex fd2 = (R.derivative(z + h).value() - R.derivative(z - h).value()) / (2 * h);
            Complex an2 = R.derivative_k(z, 2);
            CHECK(std::abs(fd2 - an2) <= 1e-5 * std::max(1.0, std::abs(an2)));
        }
    }
}

TEST_CASE("derivative at infinity") {
    CHECK(approx_equal(family_a2().derivative(SpherePoint::infinity()), 1.0));
    CHECK(approx_equal(hecke().derivative(SpherePoint::infinity()), 1.0));
    CHECK(RationalMap::polynomial({0.0, 0.0, 1.0}).derivative(SpherePoint::infinity()).is_infinite());
    CHECK(hecke().derivative(0.0).is_infinite());
}

namespace {

std::map<std::string, int> summarize(const std::vector<CriticalPoint>& cps) {
    std::map<std::string, int> out;
    for (const auto& c : cps) {
        std::string key = "inf";
        if (c.point.is_finite()) {
            Complex z = c.point.value();
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f,%.6f", z.real() + 0.0, z.imag() + 0.0);
            key = buf;
            if (key.find("-0.000000") != std::string::npos) {
                // normalize signed zeros produced by rounding
                std::snprintf(buf, sizeof buf, "%.6f,%.6f", std::abs(z.real()) < 5e-7 ? 0.0 : z.real(),
                              std::abs(z.imag()) < 5e-7 ? 0.0 : z.imag());
                key = buf;
            }
        }
        out[key] += c.multiplicity;
    }
    return out;
}

int total_multiplicity(const std::vector<CriticalPoint>& cps) {
    int t = 0;
    for (const auto& c : cps) t += c.multiplicity;
    return t;
}

} // namespace

TEST_CASE("critical points") {
    auto a = summarize(critical_points(family_a2()));
    CHECK(a == std::map<std::string, int>{{"0.000000,0.000000", 2}, {"1.000000,0.000000", 1},
                                          {"-1.000000,0.000000", 1}, {"0.000000,1.000000", 1},
                                          {"0.000000,-1.000000", 1}});
    auto h = summarize(critical_points(hecke()));
    CHECK(h == std::map<std::string, int>{{"-0.500000,0.000000", 2}, {"1.000000,0.000000", 1},
                                          {"0.000000,0.000000", 1}});
    for (int d = 2; d <= 7; ++d) {
        Poly zd(d + 1, 0.0);
        zd[d] = 1.0;
        auto c = summarize(critical_points(RationalMap::polynomial(zd)));
        CHECK(c == std::map<std::string, int>{{"0.000000,0.000000", d - 1}, {"inf", d - 1}});
    }
    // degree equal at top and bottom: infinity handled through the chart
    RationalMap m({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}); // z^2/(z^2+1), critical at 0 and infinity
    auto mc = summarize(critical_points(m));
    CHECK(mc == std::map<std::string, int>{{"0.000000,0.000000", 1}, {"inf", 1}});
    CHECK(m.multiplicity_at_infinity() == 1);
}

TEST_CASE("Riemann-Hurwitz count on random maps") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        int dn = 1 + trial % 5, dd = trial % 4;
        Poly num, den;
        for (int k = 0; k <= dn; ++k) num.push_back(rnd(rng));
        for (int k = 0; k <= dd; ++k) den.push_back(rnd(rng));
        RationalMap R(num, den);
        if (R.degree() < 2) continue;
        CHECK(total_multiplicity(critical_points(R)) == 2 * R.degree() - 2);
    }
}

TEST_CASE("solve_preimages") {
    RationalMap R = hecke();
    auto f = solve_preimages(R, 27.0 / 8.0);
    REQUIRE(f.size() == 2);
    const FiberPoint* one = find_point(f, 1.0, 1e-9);
    const FiberPoint* other = find_point(f, -0.125, 1e-12);
    REQUIRE(one);
    REQUIRE(other);
    CHECK(one->multiplicity == 2);
    CHECK(other->multiplicity == 1);

    auto z3 = solve_preimages(RationalMap::polynomial({0.0, 0.0, 0.0, 1.0}), 0.0);
    REQUIRE(z3.size() == 1);
    CHECK(z3[0].multiplicity == 3);

    auto inf = solve_preimages(R, SpherePoint::infinity());
    REQUIRE(inf.size() == 2);
    REQUIRE(find_point(inf, 0.0, 1e-12));
    CHECK(find_point(inf, 0.0, 1e-12)->multiplicity == 2);
    REQUIRE(find_point(inf, SpherePoint::infinity(), 1e-12));
    CHECK(find_point(inf, SpherePoint::infinity(), 1e-12)->multiplicity == 1);

    // w equal to R(infinity) for an equal-degree map sends a root to infinity
    RationalMap m({1.0, 0.0, 2.0}, {0.0, 1.0, 1.0});
    auto fm = solve_preimages(m, 2.0);
    CHECK(find_point(fm, SpherePoint::infinity(), 1e-12));
}

TEST_CASE("preimage residuals and counts") {
    std::mt19937_64 rng(9);
    for (const RationalMap& R : {hecke(), family_a2()}) {
        for (int i = 0; i < 200; ++i) {
            Complex w = rnd(rng, 5.0);
            auto fib = solve_preimages(R, w);
            int total = 0;
            for (const auto& x : fib) {
                total += x.multiplicity;
                CHECK(chordal_distance(R(x.point), w) < 1e-8);
            }
            CHECK(total == R.degree());
        }
    }
}

TEST_CASE("conjugate") {
    RationalMap R = hecke();
    CHECK(coefficient_distance(conjugate(R, MobiusMap::identity(), MobiusMap::identity()), R) < 1e-14);
    MobiusMap M1(4.0, -1.0, 2.0, 1.0);
    MobiusMap M2(4.0, -27.0, 0.0, 2.0); // w -> 2 - 27/(2w) written as (4w - 27)/(2w)
    MobiusMap M2b(4.0, -27.0, 2.0, 0.0);
    RationalMap R1 = conjugate(R, M2b, M1.inverse());
    CHECK(R1.is_polynomial());
    CHECK(coefficient_distance(R1, RationalMap::polynomial({0.0, -3.0, 0.0, 1.0})) < 1e-12);
    (void)M2;

    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        auto mob = [&] {
            for (;;) {
                Complex a = rnd(rng), b = rnd(rng), c = rnd(rng), d = rnd(rng);
                if (std::abs(a * d - b * c) > 0.2) return MobiusMap(a, b, c, d);
            }
        };
        MobiusMap post = mob(), pre = mob();
        RationalMap C = conjugate(R, post, pre);
        CHECK(C.degree() == R.degree());
        Complex z = rnd(rng);
        CHECK(chordal_distance(C(z), post(R(pre(z)))) < 1e-9);
    }
}

TEST_CASE("multiple root backward error") {
    const Poly p = poly_pow(Poly{-2.0, 1.0}, 3);
    CHECK(multiple_root_backward_error(p, 2.0, 3) < 1e-15);
    CHECK(multiple_root_backward_error(p, 2.0 + 1e-3, 3) > 1e-8);
    CHECK(multiple_root_backward_error(p, 2.0 + 1e-3, 1) < 1e-8);
    // a well separated pair is not a double root
    CHECK(multiple_root_backward_error(poly_from_roots({0.3, 0.31}), 0.305, 2) > 1e-6);
}
