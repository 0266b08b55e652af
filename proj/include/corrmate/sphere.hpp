#pragma once

#include <array>
#include <complex>
#include <iosfwd>

namespace corrmate {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A point of the Riemann sphere: a finite complex number or the point at infinity.
class SpherePoint {
public:
    constexpr SpherePoint() = default;
    constexpr SpherePoint(Complex z) : z_(z) {}
    constexpr SpherePoint(double re, double im = 0.0) : z_(re, im) {}

    static constexpr SpherePoint infinity() {
        SpherePoint p;
        p.infinite_ = true;
        return p;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    /// The finite value; meaningless (zero) at infinity.
    constexpr Complex value() const { return z_; }

    /// Position on the unit sphere under inverse stereographic projection.
    std::array<double, 3> to_unit_sphere() const;

    friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

private:
    Complex z_{};
    bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const SpherePoint& p);

/// Chordal distance 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)), extended to infinity. Range [0, 2].
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

/// Tolerance equality: infinity equals only infinity, finite points compare by modulus of difference.
bool approx_equal(const SpherePoint& a, const SpherePoint& b, double eps = 1e-9);

/// The involution z -> 1/z.
SpherePoint eta(const SpherePoint& z);

/// z -> conj(z), fixing infinity.
SpherePoint conj(const SpherePoint& z);

/// Matrix (a b; c d) acting by z -> (az+b)/(cz+d).
class MobiusMap {
public:
    MobiusMap(Complex a, Complex b, Complex c, Complex d);

    static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static MobiusMap rotation(Complex omega) { return {omega, 0.0, 0.0, 1.0}; }
    static MobiusMap eta() { return {0.0, 1.0, 1.0, 0.0}; }

    /// The unique map sending z1, z2, z3 to w1, w2, w3. Throws DegenerateError on repeated points.
    static MobiusMap from_three_points(const std::array<SpherePoint, 3>& from,
                                       const std::array<SpherePoint, 3>& to);

    Complex a() const { return m_[0]; }
    Complex b() const { return m_[1]; }
    Complex c() const { return m_[2]; }
    Complex d() const { return m_[3]; }
    const std::array<Complex, 4>& entries() const { return m_; }
    Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    SpherePoint operator()(const SpherePoint& z) const;

    /// Complex derivative det/(cz+d)^2 at a finite, non-pole point.
    Complex derivative(Complex z) const;

    /// Scaled so that det = 1, with the first non-negligible entry in the closed right half-plane.
    MobiusMap normalized() const;

    MobiusMap inverse() const;

    /// Composition: (*this)(inner(z)).
    MobiusMap operator*(const MobiusMap& inner) const;

    /// Max-entry distance between normalized matrices, minimized over the overall sign.
    double distance(const MobiusMap& other) const;

private:
    std::array<Complex, 4> m_;
};

std::ostream& operator<<(std::ostream& os, const MobiusMap& m);

inline MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner) { return outer * inner; }

/// Bi-infinite hyperbolic geodesic of the unit disk, given by its two ideal endpoints.
class Geodesic {
public:
    Geodesic(Complex u, Complex v, double eps = 1e-9);

    Complex u() const { return u_; }
    Complex v() const { return v_; }
    bool is_diameter() const { return diameter_; }

    /// Center and squared radius of the orthogonal circle; only meaningful when not a diameter.
    Complex center() const { return center_; }
    double radius_squared() const { return radius2_; }

private:
    Complex u_, v_;
    bool diameter_;
    Complex center_{};
    double radius2_ = 0.0;
};

/// Which boundary arc of the geodesic designates the half-plane: the arc running
/// counter-clockwise from u to v, or the one running clockwise.
enum class ArcSide { CounterClockwise, Clockwise };

/// Anticonformal reflection in the geodesic, extended to the sphere.
SpherePoint reflect_in_geodesic(const Geodesic& g, const SpherePoint& z);

/// Closed hyperbolic half-plane bounded by g on the side of the designated arc.
bool halfplane_contains(const Geodesic& g, ArcSide side, const SpherePoint& z, double eps = 1e-9);

/// The Mobius map obtained by reflecting in `first` and then in `second`.
MobiusMap compose_reflections(const Geodesic& first, const Geodesic& second);

} // namespace corrmate
