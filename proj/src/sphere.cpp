#include "corrmate/sphere.hpp"

#include "corrmate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace corrmate {

std::array<double, 3> SpherePoint::to_unit_sphere() const {
    if (infinite_) return {0.0, 0.0, 1.0};
    const double r2 = std::norm(z_);
    const double s = 1.0 + r2;
    return {2.0 * z_.real() / s, 2.0 * z_.imag() / s, (r2 - 1.0) / s};
}

std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
    if (p.is_infinite()) return os << "inf";
    return os << p.value();
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_infinite() && b.is_infinite()) return 0.0;
    if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
    if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
    const Complex x = a.value(), y = b.value();
    return 2.0 * std::abs(x - y) / std::sqrt((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
}

bool approx_equal(const SpherePoint& a, const SpherePoint& b, double eps) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return std::abs(a.value() - b.value()) <= eps;
}

SpherePoint eta(const SpherePoint& z) {
    if (z.is_infinite()) return SpherePoint(0.0);
    if (z.value() == Complex(0.0)) return SpherePoint::infinity();
    return SpherePoint(1.0 / z.value());
}

SpherePoint conj(const SpherePoint& z) {
    if (z.is_infinite()) return z;
    return SpherePoint(std::conj(z.value()));
}

// ---------------------------------------------------------------------------
// MobiusMap

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) : m_{a, b, c, d} {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(scale > 0.0) || !std::isfinite(scale) || std::abs(a * d - b * c) <= 1e-14 * scale * scale)
        throw DegenerateError("degenerate Mobius matrix (ad - bc = 0)");
}

namespace {

// Matrix sending z1, z2, z3 to 0, infinity, 1.
std::array<Complex, 4> cross_ratio_matrix(const std::array<SpherePoint, 3>& z) {
    const auto& [z1, z2, z3] = z;
    if (z1.is_infinite()) {
        const Complex b = z3.value() - z2.value();
        return {0.0, b, 1.0, -z2.value()};
    }
    if (z2.is_infinite()) return {1.0, -z1.value(), 0.0, z3.value() - z1.value()};
    if (z3.is_infinite()) return {1.0, -z1.value(), 1.0, -z2.value()};
    const Complex k1 = z3.value() - z2.value();
    const Complex k2 = z3.value() - z1.value();
    return {k1, -z1.value() * k1, k2, -z2.value() * k2};
}

} // namespace

MobiusMap MobiusMap::from_three_points(const std::array<SpherePoint, 3>& from,
                                       const std::array<SpherePoint, 3>& to) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (approx_equal(from[i], from[j], 1e-14) || approx_equal(to[i], to[j], 1e-14))
                throw DegenerateError("three-point Mobius map needs distinct points");
    const auto s = cross_ratio_matrix(from);
    const auto t = cross_ratio_matrix(to);
    const MobiusMap S(s[0], s[1], s[2], s[3]);
    const MobiusMap T(t[0], t[1], t[2], t[3]);
    return (T.inverse() * S).normalized();
}

SpherePoint MobiusMap::operator()(const SpherePoint& z) const {
    const auto& [a, b, c, d] = m_;
    if (z.is_infinite()) {
        if (c == Complex(0.0)) return SpherePoint::infinity();
        return SpherePoint(a / c);
    }
    const Complex den = c * z.value() + d;
    if (den == Complex(0.0)) return SpherePoint::infinity();
    return SpherePoint((a * z.value() + b) / den);
}

Complex MobiusMap::derivative(Complex z) const {
    const Complex den = m_[2] * z + m_[3];
    return det() / (den * den);
}

MobiusMap MobiusMap::normalized() const {
    const Complex s = std::sqrt(det());
    std::array<Complex, 4> e{m_[0] / s, m_[1] / s, m_[2] / s, m_[3] / s};
    for (const Complex& x : e) {
        if (std::abs(x) <= 1e-14) continue;
        if (x.real() < 0.0 || (x.real() == 0.0 && x.imag() < 0.0))
            for (Complex& y : e) y = -y;
        break;
    }
    return {e[0], e[1], e[2], e[3]};
}

MobiusMap MobiusMap::inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

MobiusMap MobiusMap::operator*(const MobiusMap& o) const {
    const auto& x = m_;
    const auto& y = o.m_;
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

double MobiusMap::distance(const MobiusMap& other) const {
    const auto p = normalized().entries();
    const auto q = other.normalized().entries();
    double plus = 0.0, minus = 0.0;
    for (int i = 0; i < 4; ++i) {
        plus = std::max(plus, std::abs(p[i] - q[i]));
        minus = std::max(minus, std::abs(p[i] + q[i]));
    }
    return std::min(plus, minus);
}

std::ostream& operator<<(std::ostream& os, const MobiusMap& m) {
    return os << "(" << m.a() << " " << m.b() << "; " << m.c() << " " << m.d() << ")";
}

// ---------------------------------------------------------------------------
// Geodesics and reflections

Geodesic::Geodesic(Complex u, Complex v, double eps) : u_(u), v_(v) {
    if (std::abs(std::abs(u) - 1.0) > eps || std::abs(std::abs(v) - 1.0) > eps)
        throw DegenerateError("geodesic endpoints must lie on the unit circle");
    if (std::abs(u - v) <= eps) throw DegenerateError("geodesic endpoints coincide");
    diameter_ = std::abs(u + v) <= eps;
    if (!diameter_) {
        center_ = (u + v) / (1.0 + (u * std::conj(v)).real());
        radius2_ = std::norm(center_) - 1.0;
    }
}

SpherePoint reflect_in_geodesic(const Geodesic& g, const SpherePoint& z) {
    if (g.is_diameter()) {
        if (z.is_infinite()) return z;
        return SpherePoint(g.u() * g.u() * std::conj(z.value()));
    }
    const Complex c = g.center();
    if (z.is_infinite()) return SpherePoint(c);
    const Complex w = z.value() - c;
    if (w == Complex(0.0)) return SpherePoint::infinity();
    return SpherePoint(c + g.radius_squared() / std::conj(w));
}

namespace {

// Signed side function; zero exactly on the geodesic (or its orthogonal circle).
double side_value(const Geodesic& g, Complex z) {
    if (g.is_diameter()) return (std::conj(g.u()) * z).imag();
    return std::norm(z - g.center()) - g.radius_squared();
}

Complex arc_midpoint(const Geodesic& g, ArcSide side) {
    double sweep = std::arg(g.v() / g.u()); // in (-pi, pi]
    if (side == ArcSide::CounterClockwise) {
        if (sweep <= 0.0) sweep += 2.0 * kPi;
    } else {
        if (sweep >= 0.0) sweep -= 2.0 * kPi;
    }
    return g.u() * std::polar(1.0, sweep / 2.0);
}

} // namespace

bool halfplane_contains(const Geodesic& g, ArcSide side, const SpherePoint& z, double eps) {
    if (z.is_infinite()) return false;
    const double s = side_value(g, z.value());
    if (std::abs(s) <= eps) return true;
    return (s > 0.0) == (side_value(g, arc_midpoint(g, side)) > 0.0);
}

namespace {

// z -> A(conj z) for the reflection in g.
std::array<Complex, 4> reflection_matrix(const Geodesic& g) {
    if (g.is_diameter()) return {g.u() * g.u(), 0.0, 0.0, 1.0};
    const Complex c = g.center();
    return {c, g.radius_squared() - std::norm(c), 1.0, -std::conj(c)};
}

} // namespace

MobiusMap compose_reflections(const Geodesic& first, const Geodesic& second) {
    // second(first(z)) = A2(conj(A1(conj z))) = (A2 * conj(A1))(z)
    const auto a1 = reflection_matrix(first);
    const auto a2 = reflection_matrix(second);
    const MobiusMap m1(std::conj(a1[0]), std::conj(a1[1]), std::conj(a1[2]), std::conj(a1[3]));
    const MobiusMap m2(a2[0], a2[1], a2[2], a2[3]);
    return (m2 * m1).normalized();
}

} // namespace corrmate
