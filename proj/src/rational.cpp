#include "corrmate/rational.hpp"

#include "corrmate/errors.hpp"

#include <cmath>

namespace corrmate {

namespace {

constexpr double kFarChart = 1e8;

SpherePoint finite_or_infinity(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return SpherePoint::infinity();
    return SpherePoint(z);
}

double abs_eval(const Poly& p, double r) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

// Taylor coefficients of p at z0: p(z0 + h) = sum t_k h^k.
Poly taylor_shift(Poly p, Complex z0) {
    const int n = static_cast<int>(p.size()) - 1;
    for (int i = 0; i < n; ++i)
        for (int k = n - 1; k >= i; --k) p[k] += z0 * p[k + 1];
    return p;
}

} // namespace

RationalMap::RationalMap(Poly num, Poly den) : num_(poly_trim(std::move(num))), den_(poly_trim(std::move(den))) {
    dn_ = corrmate::degree(num_);
    dd_ = corrmate::degree(den_);
    if (dd_ < 0) throw DegenerateError("rational map with zero denominator");
    if (dn_ < 0) throw DegenerateError("rational map with zero numerator");
    const Complex lead = den_[dd_];
    for (auto& c : num_) c /= lead;
    for (auto& c : den_) c /= lead;
    den_[dd_] = 1.0;
    if (dd_ > 0) {
        for (const Root& r : find_roots(den_)) {
            const double scale = abs_eval(num_, std::abs(r.value));
            if (std::abs(poly_eval(num_, r.value)) <= 1e-10 * scale)
                throw DegenerateError("numerator and denominator share a root");
        }
    }
}

SpherePoint RationalMap::eval(const SpherePoint& zp) const {
    if (zp.is_infinite()) {
        if (dn_ > dd_) return SpherePoint::infinity();
        if (dn_ < dd_) return SpherePoint(0.0);
        return SpherePoint(num_[dn_]);
    }
    const Complex z = zp.value();
    if (std::abs(z) > kFarChart) {
        const Complex t = 1.0 / z;
        const Complex rn = poly_eval(poly_reverse(num_, dn_), t);
        const Complex rd = poly_eval(poly_reverse(den_, dd_), t);
        if (rd == Complex(0.0)) return SpherePoint::infinity();
        return finite_or_infinity(std::pow(z, dn_ - dd_) * rn / rd);
    }
    const Complex d = poly_eval(den_, z);
    if (d == Complex(0.0)) return SpherePoint::infinity();
    return finite_or_infinity(poly_eval(num_, z) / d);
}

SpherePoint RationalMap::derivative(const SpherePoint& zp) const {
    if (zp.is_infinite()) {
        if (dn_ - dd_ >= 2) return SpherePoint::infinity();
        if (dn_ - dd_ == 1) return SpherePoint(num_[dn_]);
        return SpherePoint(0.0);
    }
    const Complex z = zp.value();
    const Complex d = poly_eval(den_, z);
    if (d == Complex(0.0)) return SpherePoint::infinity();
    const Complex n = poly_eval(num_, z);
    const Complex dnv = poly_eval(poly_derivative(num_), z);
    const Complex ddv = poly_eval(poly_derivative(den_), z);
    if (std::abs(z) > kFarChart && n != Complex(0.0)) {
        const SpherePoint r = eval(zp);
        if (r.is_infinite()) return SpherePoint::infinity();
        return finite_or_infinity(r.value() * (dnv / n - ddv / d));
    }
    return finite_or_infinity((dnv * d - n * ddv) / (d * d));
}

Complex RationalMap::derivative_k(Complex z, int k) const {
    const Poly tn = taylor_shift(num_, z);
    const Poly td = taylor_shift(den_, z);
    if (td[0] == Complex(0.0)) throw DomainError("derivative_k at a pole");
    // series division tn / td up to order k
    Poly s(k + 1, 0.0);
    for (int i = 0; i <= k; ++i) {
        Complex acc = i < static_cast<int>(tn.size()) ? tn[i] : Complex(0.0);
        for (int j = 1; j <= i && j < static_cast<int>(td.size()); ++j) acc -= td[j] * s[i - j];
        s[i] = acc / td[0];
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return fact * s[k];
}

int RationalMap::multiplicity_at_infinity() const {
    if (dn_ > dd_) return dn_ - dd_ - 1;
    if (dn_ < dd_) return dd_ - dn_ - 1;
    // chart t = 1/z: R = rn(t)/rd(t); order of vanishing of rn - L rd at t = 0
    const Poly rn = poly_reverse(num_, dn_);
    const Poly rd = poly_reverse(den_, dd_);
    const Complex L = rn[0] / rd[0];
    const Poly diff = poly_sub(rn, poly_scale(rd, L));
    double scale = 0.0;
    for (const auto& c : rn) scale = std::max(scale, std::abs(c));
    for (int k = 1; k < static_cast<int>(diff.size()); ++k)
        if (std::abs(diff[k]) > 1e-12 * scale) return k - 1;
    return 0;
}

std::vector<CriticalPoint> critical_points(const RationalMap& R, const Config& cfg) {
    if (R.degree() < 2) throw DomainError("critical points need degree >= 2");
    const Poly W = poly_trim(
        poly_sub(poly_mul(poly_derivative(R.num()), R.den()), poly_mul(R.num(), poly_derivative(R.den()))), 1e-14);
    std::vector<CriticalPoint> out;
    int total = 0;
    for (const Root& r : find_roots(W, cfg.cluster_radius)) {
        out.push_back({SpherePoint(r.value), r.multiplicity, R(r.value), r.ill_conditioned});
        total += r.multiplicity;
    }
    const int at_inf = 2 * R.degree() - 2 - total;
    if (at_inf < 0) throw RootFindingError("critical point count exceeds 2 deg - 2");
    if (at_inf > 0) out.push_back({SpherePoint::infinity(), at_inf, R(SpherePoint::infinity()), false});
    return out;
}

std::vector<FiberPoint> solve_preimages(const RationalMap& R, const SpherePoint& w, const Config& cfg) {
    std::vector<FiberPoint> out;
    int total = 0;
    if (w.is_infinite()) {
        if (R.den_degree() > 0)
            for (const Root& r : find_roots(R.den(), cfg.cluster_radius)) {
                out.push_back({SpherePoint(r.value), r.multiplicity, r.ill_conditioned});
                total += r.multiplicity;
            }
    } else {
        const Poly P = poly_trim(poly_sub(R.num(), poly_scale(R.den(), w.value())), 1e-14);
        if (degree(P) >= 0) {
            for (const Root& r : find_roots(P, cfg.cluster_radius)) {
                FiberPoint f{SpherePoint(r.value), r.multiplicity, r.ill_conditioned};
                if (chordal_distance(R(f.point), w) > cfg.root_tol) f.ill_conditioned = true;
                out.push_back(f);
                total += r.multiplicity;
            }
        }
    }
    if (total < R.degree()) out.push_back({SpherePoint::infinity(), R.degree() - total, false});
    return out;
}

std::vector<SpherePoint> flatten(const std::vector<FiberPoint>& fiber) {
    std::vector<SpherePoint> out;
    for (const auto& f : fiber) out.insert(out.end(), f.multiplicity, f.point);
    return out;
}

RationalMap conjugate(const RationalMap& R, const MobiusMap& post, const MobiusMap& pre) {
    const int D = R.degree();
    const Poly lin_top{pre.b(), pre.a()};
    const Poly lin_bot{pre.d(), pre.c()};
    std::vector<Poly> top_pow{{1.0}}, bot_pow{{1.0}};
    for (int k = 1; k <= D; ++k) {
        top_pow.push_back(poly_mul(top_pow.back(), lin_top));
        bot_pow.push_back(poly_mul(bot_pow.back(), lin_bot));
    }
    auto homogenize = [&](const Poly& p) {
        Poly acc{0.0};
        for (int k = 0; k < static_cast<int>(p.size()) && k <= D; ++k)
            acc = poly_add(acc, poly_scale(poly_mul(top_pow[k], bot_pow[D - k]), p[k]));
        return acc;
    };
    const Poly N1 = homogenize(R.num());
    const Poly D1 = homogenize(R.den());
    const Poly num = poly_add(poly_scale(N1, post.a()), poly_scale(D1, post.b()));
    const Poly den = poly_add(poly_scale(N1, post.c()), poly_scale(D1, post.d()));
    // cancellation leaves round-off in the top coefficients; trim relative to the whole map
    double scale = 0.0;
    for (const auto& c : num) scale = std::max(scale, std::abs(c));
    for (const auto& c : den) scale = std::max(scale, std::abs(c));
    auto trim = [&](Poly p) {
        for (auto& c : p)
            if (std::abs(c) <= 1e-12 * scale) c = 0.0;
        return poly_trim(std::move(p));
    };
    return RationalMap(trim(num), trim(den));
}

double coefficient_distance(const RationalMap& a, const RationalMap& b) {
    auto diff = [](const Poly& x, const Poly& y) {
        double m = 0.0;
        for (std::size_t k = 0; k < std::max(x.size(), y.size()); ++k) {
            const Complex u = k < x.size() ? x[k] : Complex(0.0);
            const Complex v = k < y.size() ? y[k] : Complex(0.0);
            m = std::max(m, std::abs(u - v));
        }
        return m;
    };
    return std::max(diff(a.num(), b.num()), diff(a.den(), b.den()));
}

} // namespace corrmate
