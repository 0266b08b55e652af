#include "corrmate/normal_form.hpp"

#include "corrmate/bers.hpp"
#include "corrmate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace corrmate {

double divided_difference_defect(const RationalMap& R1, Complex u, Complex v) {
    // coefficients of (P(u) - P(v)) / (u - v) = sum_k c_k sum_{i+j=k-1} u^i v^j
    const Poly& c = R1.num();
    Complex acc = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        Complex s = 0.0, ui = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            s += ui * std::pow(v, static_cast<int>(k - 1 - i));
            ui *= u;
        }
        acc += c[k] * s;
    }
    const double scale = std::pow(std::max({1.0, std::abs(u), std::abs(v)}), R1.degree() - 1);
    return std::abs(acc) / scale;
}

NormalFormResult bp_normalize(const RationalMap& R, int n, const Config& cfg, std::uint64_t seed) {
    const auto rep = validate_family(R, n, 1, cfg);
    if (!rep.passed()) throw AuditError("critical audit failed: " + rep.first_failure());
    if (rep.boundary_critical.size() != 1 || rep.tiling_critical.size() != 1)
        throw AuditError("expected one boundary and one tiling critical point");

    NormalFormResult res;
    res.n = n;
    res.c1 = rep.boundary_critical[0];
    res.c2 = SpherePoint(0.0);
    res.c3 = rep.tiling_critical[0];
    res.M1 = MobiusMap::from_three_points({res.c1, res.c2, res.c3}, {SpherePoint(1.0), SpherePoint(-1.0), SpherePoint::infinity()});
    res.M2 = MobiusMap::from_three_points({R(res.c1), R(res.c2), R(res.c3)},
                                          {SpherePoint(-2.0), SpherePoint(2.0), SpherePoint::infinity()});
    res.R1 = conjugate(R, res.M2, res.M1.inverse());
    if (!res.R1.is_polynomial() || res.R1.degree() != n) throw AuditError("R1 is not a polynomial of degree n");
    const SpherePoint a = res.M1(SpherePoint(-1.0));
    if (a.is_infinite()) throw AuditError("M1(-1) is infinite");
    res.a = a.value();
    res.M3 = MobiusMap(1.0, -1.0, -1.0, res.a);
    res.R2 = conjugate(res.R1, MobiusMap::identity(), res.M3.inverse());
    res.eta1 = res.M1 * MobiusMap::eta() * res.M1.inverse();
    res.eta2 = res.M3 * res.eta1 * res.M3.inverse();

    if (n == 3) {
        const RationalMap target = RationalMap::polynomial({0.0, -3.0, 0.0, 1.0});
        res.cubic_residual = coefficient_distance(res.R1, target);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int pairs = 0;
    while (pairs < 64) {
        const Complex X(u(rng), u(rng));
        const SpherePoint v = res.M3.inverse()(SpherePoint(-X));
        if (v.is_infinite()) continue;
        for (const auto& y : bp_branches(res, X, cfg)) {
            const SpherePoint uy = res.M3.inverse()(y.point);
            if (uy.is_infinite()) continue;
            res.final_identity_residual =
                std::max(res.final_identity_residual, divided_difference_defect(res.R1, uy.value(), v.value()));
            ++pairs;
        }
    }
    return res;
}

std::vector<FiberPoint> bp_branches(const NormalFormResult& res, const SpherePoint& X, const Config& cfg) {
    const MobiusMap back = res.M3.inverse();
    const SpherePoint minus_x = X.is_infinite() ? X : SpherePoint(-X.value());
    const SpherePoint v = back(minus_x);
    std::vector<FiberPoint> out;
    if (v.is_infinite()) {
        // the polynomial is totally ramified at infinity
        out.push_back({res.M3(SpherePoint::infinity()), res.n - 1, false});
        return out;
    }
    // (R1(u) - R1(v)) / (u - v): deflate R1 - R1(v) at v
    Poly shifted = res.R1.num();
    shifted[0] -= poly_eval(res.R1.num(), v.value());
    const Poly dd = deflate(shifted, v.value());
    for (const auto& r : find_roots(dd, cfg.cluster_radius)) out.push_back({res.M3(SpherePoint(r.value)), r.multiplicity, r.ill_conditioned});
    return out;
}

} // namespace corrmate
