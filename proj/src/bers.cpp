#include "corrmate/bers.hpp"

#include "corrmate/errors.hpp"
#include "corrmate/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrmate {

namespace {

constexpr double kPairTol = 1e-7;

// z + sum a_j z^{-j} as (z^{m+1} + sum a_j z^{m-j}) / z^m, m = number of coefficients
RationalMap from_laurent(const std::vector<Complex>& a) {
    const int m = static_cast<int>(a.size());
    Poly num(m + 2, 0.0);
    num[m + 1] = 1.0;
    for (int j = 1; j <= m; ++j) num[m - j] += a[j - 1];
    Poly den(m + 1, 0.0);
    den[m] = 1.0;
    return RationalMap(num, den);
}

bool contains(const std::vector<Complex>& pts, Complex x, double tol) {
    for (const auto& c : pts)
        if (std::abs(c - x) <= tol) return true;
    return false;
}

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(10);
    os << z;
    return os.str();
}

} // namespace

namespace {

// x is a critical point of multiplicity n-1 over v: an n-fold root of num - v den. Values near a
// pole of high order are too sensitive to compare directly, so this tests the backward error.
bool same_critical_value(const RationalMap& R, Complex x, const SpherePoint& v, int n) {
    const Poly P = v.is_infinite() ? R.den() : poly_sub(R.num(), poly_scale(R.den(), v.value()));
    return multiple_root_backward_error(P, x, n) <= 1e-8;
}

} // namespace

bool inversion_symmetric(const std::vector<Complex>& pts, double tol) {
    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] == Complex(0.0)) return false;
        const Complex target = 1.0 / pts[i];
        std::size_t best = pts.size();
        double dist = tol;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (!used[j] && std::abs(pts[j] - target) <= dist) {
                dist = std::abs(pts[j] - target);
                best = j;
            }
        if (best == pts.size()) return false;
        used[best] = true;
    }
    return true;
}

std::vector<Complex> family_a_coefficients(const FamilyAParams& params) {
    const int q = params.q;
    if (q < 2) throw std::invalid_argument("family A needs q >= 2");
    if (static_cast<int>(params.free.size()) != q - 2)
        throw std::invalid_argument("family A takes q-2 free parameters");
    std::vector<Complex> a(2 * q, 0.0); // a[j] = a_j, index 0 unused
    for (int j = 1; j <= q - 2; ++j) a[j] = params.free[j - 1];
    for (int j = 2; j <= q - 1; ++j)
        a[2 * q - j - 1] = -static_cast<double>(j - 1) / (2 * q - j - 1) * a[j - 1];
    a[q - 1] = 0.0;
    a[2 * q - 2] = 0.0;
    a[2 * q - 1] = 1.0 / (2 * q - 1);
    return {a.begin() + 1, a.end()};
}

std::vector<Complex> family_b_coefficients(const FamilyBParams& params) {
    const int q = params.q;
    if (q < 2) throw std::invalid_argument("family B needs q >= 2");
    if (static_cast<int>(params.free.size()) != q - 1)
        throw std::invalid_argument("family B takes q-1 free parameters");
    std::vector<Complex> a(2 * q + 1, 0.0);
    for (int j = 1; j <= q - 1; ++j) a[j] = params.free[j - 1];
    for (int j = 2; j <= q; ++j) a[2 * q - j] = -static_cast<double>(j - 1) / (2 * q - j) * a[j - 1];
    a[2 * q - 1] = 0.0;
    a[2 * q] = 1.0 / (2 * q);
    return {a.begin() + 1, a.end()};
}

RationalMap build_family_a(const FamilyAParams& params) { return from_laurent(family_a_coefficients(params)); }
RationalMap build_family_b(const FamilyBParams& params) { return from_laurent(family_b_coefficients(params)); }

std::vector<Complex> default_critical_data(int p) {
    std::vector<Complex> out;
    for (int k = 0; k < p; ++k) out.push_back(std::polar(1.0, 2.0 * kPi * k / p));
    // exact values where the trigonometry is exact
    for (auto& c : out) {
        if (std::abs(c.real()) < 1e-15) c.real(0.0);
        if (std::abs(c.imag()) < 1e-15) c.imag(0.0);
    }
    return out;
}

Poly family_c_base(const FamilyCParams& params) {
    const int n = params.n, p = params.p;
    if (n < 3) throw std::invalid_argument("family C needs n >= 3");
    if (p < 1) throw std::invalid_argument("family C needs p >= 1");
    const auto& c = params.critical_data;
    if (static_cast<int>(c.size()) != p) throw std::invalid_argument("critical_data must hold p values");
    for (const auto& x : c)
        if (std::abs(x) < 1e-12) throw DegenerateError("critical data contains 0");
    if (!contains(c, 1.0, kPairTol)) throw std::invalid_argument("critical data must contain 1");
    if (p % 2 == 0 && !contains(c, -1.0, kPairTol)) throw std::invalid_argument("critical data must contain -1 for even p");
    if (!inversion_symmetric(c, kPairTol)) throw std::invalid_argument("critical data must be closed under z -> 1/z");

    // Q = z^p + sum_j (-1)^j e_j (1 - nj) z^{p-j}, base = sum_j (-1)^j e_j z^{p-j}
    const Poly Q = poly_from_roots(c);
    Poly base(p + 1, 0.0);
    for (int j = 0; j <= p; ++j) base[p - j] = Q[p - j] / (1.0 - static_cast<double>(n) * j);
    return base;
}

RationalMap build_family_c(const FamilyCParams& params, const Config& cfg) {
    const Poly base = family_c_base(params);
    const auto zeros = find_roots(base, cfg.cluster_radius);
    if (static_cast<int>(zeros.size()) != params.p) throw DegenerateError("family C zeros collide");
    for (std::size_t i = 0; i < zeros.size(); ++i)
        for (std::size_t j = i + 1; j < zeros.size(); ++j)
            if (std::abs(zeros[i].value - zeros[j].value) < kPairTol) throw DegenerateError("family C zeros collide");
    const int d = params.n * params.p - 1;
    Poly den(d + 1, 0.0);
    den[d] = 1.0;
    return RationalMap(poly_pow(base, params.n), den);
}

int family_free_parameters(Family family, int n, int p) {
    switch (family) {
    case Family::A:
        if (n != 1 || p % 2 != 0) throw std::invalid_argument("family A is n = 1, p even");
        return p / 2 - 2;
    case Family::B:
        if (n != 1 || p % 2 != 1) throw std::invalid_argument("family B is n = 1, p odd");
        return (p - 1) / 2 - 1;
    case Family::C:
        if (n < 3) throw std::invalid_argument("family C is n >= 3");
        // one free value per pair {c, 1/c}
        return p % 2 == 0 ? (p - 2) / 2 : (p - 1) / 2;
    }
    return 0;
}

Poly critical_polynomial(const RationalMap& R, int n, int p) {
    const int np = n * p;
    const Poly& den = R.den();
    if (R.den_degree() != np - 1) throw DomainError("denominator must be z^(np-1)");
    for (int k = 0; k < np - 1; ++k)
        if (std::abs(den[k]) > 1e-12) throw DomainError("denominator must be z^(np-1)");
    if (R.num_degree() != np) throw DomainError("numerator must have degree np");
    const Poly& num = R.num();
    if (std::abs(num[np] - 1.0) > 1e-12) throw DomainError("numerator must be monic");

    // n-th root of the reversed numerator as a power series (Miller's recurrence for g^alpha)
    const Poly g = poly_reverse(num, np); // g[0] = 1
    const double alpha = 1.0 / n;
    Poly f(p + 1, 0.0);
    f[0] = 1.0;
    for (int k = 1; k <= p; ++k) {
        Complex acc = 0.0;
        for (int j = 1; j <= k && j <= np; ++j) acc += ((alpha + 1.0) * j - k) * g[j] * f[k - j];
        f[k] = acc / static_cast<double>(k);
    }
    const Poly base = poly_reverse(f, p);
    const Poly check = poly_sub(poly_pow(base, n), num);
    double scale = 0.0, resid = 0.0;
    for (const auto& c : num) scale = std::max(scale, std::abs(c));
    for (const auto& c : check) resid = std::max(resid, std::abs(c));
    if (resid > 1e-8 * scale) throw DomainError("numerator is not an n-th power");

    Poly Q = poly_sub(poly_scale(poly_mul({0.0, 1.0}, poly_derivative(base)), static_cast<double>(n)),
                      poly_scale(base, static_cast<double>(np - 1)));
    Q.resize(p + 1);
    return Q;
}

bool AuditReport::passed() const {
    for (const auto& c : clauses)
        if (!c.passed) return false;
    return !clauses.empty();
}

std::string AuditReport::first_failure() const {
    for (const auto& c : clauses)
        if (!c.passed) return c.name + ": " + c.detail;
    return {};
}

AuditReport validate_family(const RationalMap& R, int n, int p, const Config& cfg) {
    AuditReport rep;
    const int np = n * p;
    if (R.degree() != np) {
        rep.clauses.push_back({"degree", false, "expected degree " + std::to_string(np) + ", got " +
                                                   std::to_string(R.degree())});
        return rep;
    }
    const auto cps = critical_points(R, cfg);
    const double tol = 1e-6;

    // (ii) the pole at 0
    {
        AuditClause c{"ii", true, ""};
        bool pole_ok = R.den_degree() == np - 1;
        for (int k = 0; k < np - 1 && pole_ok; ++k) pole_ok = std::abs(R.den()[k]) <= 1e-12;
        int mult0 = 0;
        for (const auto& cp : cps)
            if (cp.point.is_finite() && std::abs(cp.point.value()) <= tol) mult0 += cp.multiplicity;
        c.passed = pole_ok && mult0 == np - 2;
        c.detail = "pole of order " + std::to_string(R.den_degree()) + " at 0: " + (pole_ok ? "yes" : "no") +
                   "; critical multiplicity at 0 = " + std::to_string(mult0);
        rep.clauses.push_back(c);
    }

    // finite nonzero critical points
    std::vector<CriticalPoint> rest;
    for (const auto& cp : cps)
        if (cp.point.is_finite() && std::abs(cp.point.value()) > tol) rest.push_back(cp);

    // (iii) p points of multiplicity n-1 with one critical value
    std::vector<bool> in_tiling(rest.size(), false);
    if (n >= 2) {
        AuditClause c{"iii", false, ""};
        for (std::size_t i = 0; i < rest.size() && !c.passed; ++i) {
            if (rest[i].multiplicity != n - 1) continue;
            std::vector<std::size_t> group;
            for (std::size_t j = 0; j < rest.size(); ++j)
                if (rest[j].multiplicity == n - 1 && same_critical_value(R, rest[j].point.value(), rest[i].value, n))
                    group.push_back(j);
            if (static_cast<int>(group.size()) == p) {
                c.passed = true;
                for (auto j : group) {
                    in_tiling[j] = true;
                    rep.tiling_critical.push_back(rest[j].point.value());
                }
                rep.tiling_value = rest[i].value;
            }
        }
        std::ostringstream os;
        if (c.passed)
            os << p << " points of multiplicity " << n - 1 << " with value " << rep.tiling_value;
        else
            os << "no group of " << p << " points of multiplicity " << n - 1 << " sharing a critical value";
        c.detail = os.str();
        rep.clauses.push_back(c);
    } else {
        rep.clauses.push_back({"iii", true, "vacuous for n = 1"});
    }

    // (i) the remaining p simple critical points form an eta-invariant set
    {
        AuditClause c{"i", true, ""};
        int count = 0;
        bool simple = true;
        for (std::size_t j = 0; j < rest.size(); ++j) {
            if (in_tiling[j]) continue;
            count += rest[j].multiplicity;
            simple = simple && rest[j].multiplicity == 1;
            rep.boundary_critical.push_back(rest[j].point.value());
        }
        int fixed = 0;
        for (const auto& x : rep.boundary_critical)
            if (std::abs(x - 1.0) <= kPairTol || std::abs(x + 1.0) <= kPairTol) ++fixed;
        const int want_fixed = p % 2 == 0 ? 2 : 1;
        const bool sym = inversion_symmetric(rep.boundary_critical, kPairTol);
        c.passed = count == p && simple && sym && fixed == want_fixed;
        std::ostringstream os;
        os << count << " critical points, " << (sym ? "" : "not ") << "closed under 1/z, " << fixed
           << " fixed by 1/z (want " << want_fixed << ")";
        c.detail = os.str();
        rep.clauses.push_back(c);
    }

    // (iv) normalization at infinity
    {
        const SpherePoint d = R.derivative(SpherePoint::infinity());
        const bool ok = R(SpherePoint::infinity()).is_infinite() && d.is_finite() && std::abs(d.value() - 1.0) <= 1e-12;
        rep.clauses.push_back({"iv", ok, ok ? "R(inf) = inf, R'(inf) = 1" : "R'(inf) = " + (d.is_finite() ? fmt(d.value()) : std::string("inf"))});
    }
    std::sort(rep.clauses.begin(), rep.clauses.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return rep;
}

} // namespace corrmate
