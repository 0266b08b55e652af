#pragma once

#include "corrmate/config.hpp"
#include "corrmate/polynomial.hpp"
#include "corrmate/sphere.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace corrmate {

/// num / den with coprime coefficient lists (ascending). Stored with den monic, so den = {1}
/// for a polynomial.
class RationalMap {
public:
    /// Throws DegenerateError if den is zero, num is zero, or num and den share a root.
    RationalMap(Poly num, Poly den);

    static RationalMap polynomial(Poly coeffs) { return RationalMap(std::move(coeffs), {1.0}); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int num_degree() const { return dn_; }
    int den_degree() const { return dd_; }
    int degree() const { return std::max(dn_, dd_); }
    bool is_polynomial() const { return dd_ == 0; }

    SpherePoint operator()(const SpherePoint& z) const { return eval(z); }
    SpherePoint eval(const SpherePoint& z) const;

    /// R'(z); infinite at poles. At z = infinity this is the limit of R'(z), which is finite and
    /// nonzero only when deg num = deg den + 1.
    SpherePoint derivative(const SpherePoint& z) const;

    /// k-th derivative at a finite non-pole point, k >= 0.
    Complex derivative_k(Complex z, int k) const;

    /// Local degree of R at z minus one: the critical multiplicity.
    int multiplicity_at_infinity() const;

private:
    Poly num_, den_;
    int dn_ = 0, dd_ = 0;
};

struct CriticalPoint {
    SpherePoint point;
    int multiplicity = 1;
    SpherePoint value;
    bool ill_conditioned = false;
};

/// All critical points with multiplicity; multiplicities sum to 2 deg - 2. A pole of order k
/// appears with multiplicity k - 1.
std::vector<CriticalPoint> critical_points(const RationalMap& R, const Config& cfg = {});

struct FiberPoint {
    SpherePoint point;
    int multiplicity = 1;
    bool ill_conditioned = false;
};

/// Solutions of R(u) = w with multiplicity; multiplicities sum to deg R. Degree lost by the
/// equation num - w den is assigned to infinity.
std::vector<FiberPoint> solve_preimages(const RationalMap& R, const SpherePoint& w, const Config& cfg = {});

/// Each fiber point repeated by its multiplicity.
std::vector<SpherePoint> flatten(const std::vector<FiberPoint>& fiber);

/// post o R o pre, renormalized.
RationalMap conjugate(const RationalMap& R, const MobiusMap& post, const MobiusMap& pre);

/// Largest coefficient difference after zero-padding; maps must share normalization.
double coefficient_distance(const RationalMap& a, const RationalMap& b);

} // namespace corrmate
