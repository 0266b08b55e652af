#pragma once

#include "corrmate/sphere.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace corrmate {

/// The group generated by side-pairings of the ideal np-gon bounded by the
/// geodesics C_{r,s}, r in 1..n, s in 1..p. Indices are one-based throughout.
class GroupData {
public:
    int n() const { return n_; }
    int p() const { return p_; }
    int sides() const { return n_ * p_; }
    Complex omega() const { return omega_; }

    /// Angle (in turns) of the counter-clockwise start of the arc J_{r,s}.
    double arc_start_turns(int r, int s) const;

    const Geodesic& geodesic(int r, int s) const { return geodesics_[index(r, s)]; }
    /// Endpoints of J_{r,s} in counter-clockwise order.
    std::pair<Complex, Complex> arc(int r, int s) const;
    const MobiusMap& generator(int r, int s) const { return generators_[index(r, s)]; }
    /// The diameter with endpoints +-exp(i pi/n).
    const Geodesic& ell() const { return ell_; }

    /// M_omega^k for any integer k.
    MobiusMap rotation_power(int k) const;

    std::size_t index(int r, int s) const;

private:
    friend GroupData build_group(int n, int p);
    GroupData(int n, int p);

    int n_, p_;
    Complex omega_;
    std::vector<Geodesic> geodesics_;
    std::vector<MobiusMap> generators_;
    Geodesic ell_;
};

/// Builds the group for n >= 1, p >= 1, np >= 3. Each g_{r,s} is the reflection in C_{r,s}
/// followed by the reflection in the rotated diameter M_omega^{r-1}(ell).
GroupData build_group(int n, int p);

/// Exact rational number with positive denominator.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d = 1);

    friend Fraction operator+(Fraction a, Fraction b);
    friend Fraction operator-(Fraction a, Fraction b);
    friend Fraction operator*(Fraction a, Fraction b);
    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend bool operator<(Fraction a, Fraction b) { return a.num * b.den < b.num * a.den; }
};

struct OrbifoldSignature {
    int punctures = 0;
    int order2_points = 0;
    int orderN_points = 0;
    int order_value = 0; // order of the orderN points; 0 when there are none

    /// 2 - punctures - order2/2 - orderN (1 - 1/order_value).
    Fraction euler_characteristic() const;
    bool is_hyperbolic() const { return euler_characteristic() < Fraction(0); }

    friend bool operator==(const OrbifoldSignature&, const OrbifoldSignature&) = default;
};

/// Quotient of the disk by the group (extended = false) or by its extension by M_omega.
OrbifoldSignature quotient_signature(int n, int p, bool extended);

struct GroupParameters {
    int n = 0;
    int p = 0;
    int d = 0;
    friend bool operator==(const GroupParameters&, const GroupParameters&) = default;
};

/// (punctures, order-2 flag, order-nu flag, nu) -> (n, p, d = np - 1). `nu` is ignored when delta3 = 0.
GroupParameters orbifold_to_np(int delta1, int delta2, int delta3, int nu);

/// Complex dimension of the Teichmuller space of the extended quotient orbifold.
int teich_dimension(int n, int p);

} // namespace corrmate
