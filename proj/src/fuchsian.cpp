#include "corrmate/fuchsian.hpp"

#include "corrmate/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace corrmate {

namespace {

Complex unit(double turns) { return std::polar(1.0, 2.0 * kPi * turns); }

void require_hyperbolic(int n, int p) {
    if (n < 1 || p < 1 || n * p < 3)
        throw std::invalid_argument("need n >= 1, p >= 1 and np >= 3 (got n=" + std::to_string(n) +
                                    ", p=" + std::to_string(p) + ")");
}

} // namespace

GroupData::GroupData(int n, int p)
    : n_(n), p_(p), omega_(unit(1.0 / n)), ell_(std::polar(1.0, kPi / n), -std::polar(1.0, kPi / n)) {}

std::size_t GroupData::index(int r, int s) const {
    if (r < 1 || r > n_ || s < 1 || s > p_) throw std::out_of_range("side index out of range");
    return static_cast<std::size_t>((r - 1) * p_ + (s - 1));
}

double GroupData::arc_start_turns(int r, int s) const {
    return static_cast<double>(index(r, s)) / sides();
}

std::pair<Complex, Complex> GroupData::arc(int r, int s) const {
    const double t = arc_start_turns(r, s);
    return {unit(t), unit(t + 1.0 / sides())};
}

MobiusMap GroupData::rotation_power(int k) const {
    const int m = ((k % n_) + n_) % n_;
    return MobiusMap::rotation(unit(static_cast<double>(m) / n_));
}

GroupData build_group(int n, int p) {
    require_hyperbolic(n, p);
    GroupData g(n, p);
    const int sides = n * p;
    g.geodesics_.reserve(sides);
    g.generators_.reserve(sides);
    for (int r = 1; r <= n; ++r) {
        const Complex rot = unit(static_cast<double>(r - 1) / n);
        const Geodesic ell_r(rot * g.ell_.u(), rot * g.ell_.v());
        for (int s = 1; s <= p; ++s) {
            const double t = static_cast<double>(r - 1) / n + static_cast<double>(s - 1) / sides;
            Geodesic c(unit(t), unit(t + 1.0 / sides));
            g.generators_.push_back(compose_reflections(c, ell_r));
            g.geodesics_.push_back(c);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Orbifold arithmetic

Fraction::Fraction(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) n = -n, d = -d;
    const std::int64_t g = std::gcd(n, d);
    num = n / g;
    den = d / g;
}

Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }

Fraction OrbifoldSignature::euler_characteristic() const {
    Fraction chi = Fraction(2) - Fraction(punctures) - Fraction(order2_points, 2);
    if (orderN_points > 0) chi = chi - Fraction(orderN_points) * (Fraction(1) - Fraction(1, order_value));
    return chi;
}

OrbifoldSignature quotient_signature(int n, int p, bool extended) {
    require_hyperbolic(n, p);
    OrbifoldSignature sig;
    const bool even = p % 2 == 0;
    if (!extended) {
        if (even) {
            sig.punctures = n * p / 2 + 1;
        } else {
            sig.punctures = n * (p - 1) / 2 + 1;
            sig.order2_points = n;
        }
        return sig;
    }
    sig.punctures = even ? p / 2 + 1 : (p + 1) / 2;
    sig.order2_points = even ? 0 : 1;
    if (n >= 2) {
        sig.orderN_points = 1;
        sig.order_value = n;
    }
    return sig;
}

GroupParameters orbifold_to_np(int delta1, int delta2, int delta3, int nu) {
    if (delta1 < 1) throw std::invalid_argument("at least one puncture is required");
    if ((delta2 != 0 && delta2 != 1) || (delta3 != 0 && delta3 != 1))
        throw std::invalid_argument("delta2 and delta3 must be 0 or 1");
    if (delta3 == 1 && nu < 3) throw std::invalid_argument("orbifold order nu must be >= 3");
    GroupParameters out;
    out.n = delta3 == 1 ? nu : 1;
    out.p = delta2 == 1 ? 2 * delta1 - 1 : 2 * (delta1 - 1);
    if (out.p < 1 || out.n * out.p < 3)
        throw std::invalid_argument("signature is not hyperbolic (np < 3)");
    out.d = out.n * out.p - 1;
    return out;
}

int teich_dimension(int n, int p) {
    // A genus zero orbifold with k marked points (punctures or cone points) has k - 3 moduli.
    const OrbifoldSignature sig = quotient_signature(n, p, true);
    return sig.punctures + sig.order2_points + sig.orderN_points - 3;
}

} // namespace corrmate
