#pragma once

#include "corrmate/config.hpp"
#include "corrmate/rational.hpp"

#include <cstdint>
#include <vector>

namespace corrmate {

struct NormalFormResult {
    int n = 3;
    SpherePoint c1, c2, c3; // eta-fixed critical point, the pole, the critical point of multiplicity n-1
    MobiusMap M1 = MobiusMap::identity(); // c1, c2, c3 -> 1, -1, infinity
    MobiusMap M2 = MobiusMap::identity(); // R(c1), R(c2), R(c3) -> -2, 2, infinity
    MobiusMap M3 = MobiusMap::identity(); // u -> (u - 1)/(a - u)
    RationalMap R1 = RationalMap::polynomial({0.0, 1.0}); // M2 o R o M1^-1, a polynomial of degree n
    RationalMap R2 = RationalMap::polynomial({0.0, 1.0}); // R1 o M3^-1
    Complex a = 0.0;                                      // M1(-1)
    MobiusMap eta1 = MobiusMap::identity();               // M1 o eta o M1^-1
    MobiusMap eta2 = MobiusMap::identity();               // M3 o eta1 o M3^-1, which is -z
    double cubic_residual = -1.0;         // coefficient distance of R1 to u^3 - 3u (n = 3 only)
    double final_identity_residual = 0.0; // max over sample pairs of the divided difference defect
};

/// Brings a p = 1 map of the form (z - x0)^n / z^(n-1) to the normal form. Throws AuditError if the
/// critical structure is not that of the family or R1 is not a polynomial.
NormalFormResult bp_normalize(const RationalMap& R, int n, const Config& cfg = {}, std::uint64_t seed = 7);

/// Solutions Y of R2(Y) = R2(-X) other than Y = -X (one copy removed), with multiplicity.
std::vector<FiberPoint> bp_branches(const NormalFormResult& res, const SpherePoint& X, const Config& cfg = {});

/// |(R1(u) - R1(v)) / (u - v)| scaled by max(1,|u|,|v|)^(n-1). For n = 3 and R1 = u^3 - 3u this is
/// |u^2 + uv + v^2 - 3| on the unit scale.
double divided_difference_defect(const RationalMap& R1, Complex u, Complex v);

} // namespace corrmate
