#include "corrmate/circle.hpp"

#include "corrmate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrmate {

namespace {

constexpr double kSnap = 1e-11;

// floor(t * k) with values within kSnap of an integer snapped onto it
int snapped_floor(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < kSnap) return static_cast<int>(r);
    return static_cast<int>(std::floor(x));
}

double wrap01(double t) {
    t -= std::floor(t);
    if (t >= 1.0) t = 0.0;
    return t;
}

void sort_unique(std::vector<double>& v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    if (out.size() > 1 && out.front() + 1.0 - out.back() <= tol) out.pop_back();
    v.swap(out);
}

} // namespace

double turns_of(Complex z) { return wrap01(std::atan2(z.imag(), z.real()) / (2.0 * kPi)); }

Complex from_turns(double t) { return std::polar(1.0, 2.0 * kPi * t); }

double turns_distance(double a, double b) {
    const double d = wrap01(a - b);
    return std::min(d, 1.0 - d);
}

// ---------------------------------------------------------------------------

BowenSeriesMap::BowenSeriesMap(GroupData group, double eps) : group_(std::move(group)), eps_(eps) {}

std::pair<int, int> BowenSeriesMap::piece_of_turns(double t) const {
    const int np = group_.sides();
    const int k = ((snapped_floor(wrap01(t) * np) % np) + np) % np;
    return {k / group_.p() + 1, k % group_.p() + 1};
}

std::pair<int, int> BowenSeriesMap::piece_of(const SpherePoint& zp) const {
    if (zp.is_infinite()) throw DomainError("Bowen-Series map is defined on the closed disk");
    const Complex z = zp.value();
    const double r = std::abs(z);
    if (r > 1.0 + eps_) throw DomainError("Bowen-Series map is defined on the closed disk");
    if (r >= 1.0 - eps_) return piece_of_turns(turns_of(z));
    std::vector<std::pair<int, int>> hits;
    for (int a = 1; a <= group_.n(); ++a)
        for (int s = 1; s <= group_.p(); ++s)
            if (halfplane_contains(group_.geodesic(a, s), ArcSide::CounterClockwise, z, eps_)) hits.emplace_back(a, s);
    if (hits.empty()) throw DomainError("point lies inside the fundamental polygon");
    if (hits.size() == 1) return hits.front();
    return piece_of_turns(turns_of(z));
}

SpherePoint BowenSeriesMap::operator()(const SpherePoint& z) const {
    const auto [r, s] = piece_of(z);
    return group_.generator(r, s)(z);
}

// ---------------------------------------------------------------------------

FactorCircleMap::FactorCircleMap(GroupData group, double eps) : base_(std::move(group), eps), eps_(eps) {}

Complex FactorCircleMap::principal_root(Complex z) const {
    if (z == Complex(0.0)) return 0.0;
    const int n = this->n();
    return std::polar(std::pow(std::abs(z), 1.0 / n), 2.0 * kPi * turns_of(z) / n);
}

int FactorCircleMap::piece_of_turns(double t) const {
    const int p = this->p();
    return ((snapped_floor(wrap01(t) * p) % p) + p) % p + 1;
}

SpherePoint FactorCircleMap::operator()(const SpherePoint& z) const {
    if (z.is_infinite()) throw DomainError("factor map is defined on the closed disk");
    const SpherePoint w = base_(principal_root(z.value()));
    return SpherePoint(std::pow(w.value(), n()));
}

double FactorCircleMap::map_turns_on_piece(double t, int s) const {
    const Complex w = from_turns(t / n());
    const SpherePoint u = group().generator(1, s)(w);
    return wrap01(turns_of(u.value()) * n());
}

double FactorCircleMap::map_turns(double t) const {
    t = wrap01(t);
    return map_turns_on_piece(t, piece_of_turns(t));
}

double FactorCircleMap::abs_derivative_turns(double t) const {
    t = wrap01(t);
    const MobiusMap& g = group().generator(1, piece_of_turns(t));
    return std::abs(g.derivative(from_turns(t / n())));
}

std::vector<double> FactorCircleMap::preimages_turns(double y) const {
    const int n = this->n(), p = this->p(), np = n * p;
    const double tol = 1e-12;
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
        const Complex v = from_turns((wrap01(y) + k) / n);
        for (int s = 1; s <= p; ++s) {
            const SpherePoint x = group().generator(1, s).inverse()(v);
            if (x.is_infinite()) continue;
            double tx = turns_of(x.value());
            const double lo = static_cast<double>(s - 1) / np, hi = static_cast<double>(s) / np;
            if (tx > 1.0 - tol) tx -= 1.0;
            if (tx < lo - tol || tx > hi + tol) continue;
            double z = wrap01(std::max(tx, 0.0) * n);
            if (z > 1.0 - tol) z = 0.0;
            out.push_back(z);
        }
    }
    sort_unique(out, 1e-10);
    return out;
}

std::vector<FactorCriticalPoint> critical_points_fbs(const FactorCircleMap& F) {
    std::vector<FactorCriticalPoint> out;
    if (F.n() < 2) return out;
    for (int s = 1; s <= F.p(); ++s) {
        const SpherePoint c = F.group().generator(1, s).inverse()(0.0);
        out.push_back({SpherePoint(std::pow(c.value(), F.n())), F.n() - 1, SpherePoint(0.0)});
    }
    return out;
}

LiftReport circle_lift(const FactorCircleMap& F, int samples) {
    LiftReport rep{0, 0.0, true, samples};
    double total = 0.0;
    double prev = F.map_turns(0.0);
    const double first = prev;
    for (int i = 1; i <= samples; ++i) {
        const double cur = i == samples ? first : F.map_turns(static_cast<double>(i) / samples);
        double d = cur - prev;
        d -= std::round(d); // (-1/2, 1/2]
        if (!(d > 0.0)) rep.monotone = false;
        total += d;
        prev = cur;
    }
    rep.degree = static_cast<int>(std::lround(total));
    rep.lift_defect = std::abs(total - rep.degree);
    return rep;
}

MarkovPartition markov_partition(const FactorCircleMap& F, double tol) {
    const int n = F.n(), p = F.p(), np = n * p;
    std::vector<double> b0;
    for (int s = 1; s <= p; ++s) {
        b0.push_back(static_cast<double>(s - 1) / p);
        const MobiusMap ginv = F.group().generator(1, s).inverse();
        const double lo = static_cast<double>(s - 1) / np, hi = static_cast<double>(s) / np;
        for (int j = 0; j < n; ++j) {
            const SpherePoint x = ginv(from_turns(static_cast<double>(j) / n));
            double tx = turns_of(x.value());
            if (tx > 1.0 - 1e-12) tx -= 1.0;
            if (tx > lo + 1e-12 && tx < hi - 1e-12) b0.push_back(wrap01(tx * n));
        }
    }
    sort_unique(b0, 1e-12);

    MarkovPartition mp;
    mp.initial_count = b0.size();
    std::vector<double> b1 = b0;
    for (double b : b0) {
        const auto pre = F.preimages_turns(b);
        b1.insert(b1.end(), pre.begin(), pre.end());
    }
    sort_unique(b1, 1e-12);
    mp.breakpoints = b1;

    auto nearest = [&](double x) {
        double best = 1.0;
        for (double b : b1) best = std::min(best, turns_distance(x, b));
        return best;
    };
    for (std::size_t i = 0; i < b1.size(); ++i) {
        const double left = b1[i];
        const double right = i + 1 < b1.size() ? b1[i + 1] : 1.0 + b1[0];
        const int s = F.piece_of_turns(left);
        mp.max_endpoint_error = std::max(mp.max_endpoint_error, nearest(F.map_turns_on_piece(left, s)));
        mp.max_endpoint_error = std::max(mp.max_endpoint_error, nearest(F.map_turns_on_piece(right, s)));
    }
    mp.is_markov = mp.max_endpoint_error <= tol;
    if (!mp.is_markov) throw AuditError("partition is not Markov after one pullback");
    return mp;
}

ExpansivityReport expansivity_report(const FactorCircleMap& F, int grid) {
    ExpansivityReport rep{std::numeric_limits<double>::infinity(), grid, F.p()};
    for (int s = 1; s <= F.p(); ++s) {
        const double lo = static_cast<double>(s - 1) / F.p(), width = 1.0 / F.p();
        for (int k = 0; k < grid; ++k)
            rep.lambda = std::min(rep.lambda, F.abs_derivative_turns(lo + (k + 0.5) / grid * width));
    }
    return rep;
}

// ---------------------------------------------------------------------------

CircleConjugacy::CircleConjugacy(const FactorCircleMap& F) : F_(F) {
    lambda_ = expansivity_report(F_).lambda;
    if (!(lambda_ > 1.0)) throw std::domain_error("unsupported: circle map is not expansive");
    t_ = F_.preimages_turns(0.0);
    if (static_cast<int>(t_.size()) != F_.degree())
        throw RootFindingError("expected d preimages of 1, found " + std::to_string(t_.size()));
    if (t_.front() < 1e-12) t_.front() = 0.0;
    if (t_.front() != 0.0) throw RootFindingError("1 is not among its own preimages");
}

double CircleConjugacy::inverse_branch(int j, double phi) const {
    const int d = F_.degree();
    const double lo = t_[j];
    const double hi = j + 1 < d ? t_[j + 1] : 1.0;
    if (phi <= 0.0) return lo;
    if (phi >= 1.0) return hi;
    const double guess = lo + phi * (hi - lo);
    double best = guess, dist = std::numeric_limits<double>::infinity();
    for (double c : F_.preimages_turns(phi)) {
        if (c < lo - 1e-15 || c > hi + 1e-15) continue;
        if (std::abs(c - guess) < dist) {
            dist = std::abs(c - guess);
            best = c;
        }
    }
    return best;
}

SpherePoint CircleConjugacy::evaluate(__int128 num, __int128 den, int depth) const {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (den <= 0) throw std::invalid_argument("denominator must be positive");
    const int d = F_.degree();
    num %= den;
    if (num < 0) num += den;
    std::vector<int> digits;
    std::vector<__int128> orbit;
    int cycle_start = -1;
    for (int k = 0; k < depth && num != 0; ++k) {
        for (std::size_t m = 0; m < orbit.size() && cycle_start < 0; ++m)
            if (orbit[m] == num) cycle_start = static_cast<int>(m);
        if (cycle_start >= 0) break;
        orbit.push_back(num);
        const __int128 y = num * d;
        digits.push_back(static_cast<int>(y / den));
        num = y % den;
    }
    auto pull_back = [&](double x, int from, int to) {
        for (int k = to - 1; k >= from; --k) x = inverse_branch(digits[k], x);
        return x;
    };
    double lo = 0.0, hi = 1.0;
    if (num == 0) {
        // a terminating expansion pins the point: its orbit lands on the fixed point 1
        lo = hi = pull_back(0.0, 0, static_cast<int>(digits.size()));
    } else if (cycle_start >= 0) {
        // eventually periodic: the periodic point is the fixed point of the composed inverse
        // branches over one period. Nested intervals converge slowly when the cycle is parabolic
        // (the polygon vertices), so solve for it by bisection instead.
        const int end = static_cast<int>(digits.size());
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 64 && b - a > 1e-17; ++it) {
            const double mid = 0.5 * (a + b);
            (pull_back(mid, cycle_start, end) >= mid ? a : b) = mid;
        }
        lo = hi = pull_back(0.5 * (a + b), 0, cycle_start);
    } else {
        lo = pull_back(0.0, 0, static_cast<int>(digits.size()));
        hi = pull_back(1.0, 0, static_cast<int>(digits.size()));
    }
    return SpherePoint(from_turns(0.5 * (lo + hi)));
}

SpherePoint CircleConjugacy::operator()(std::int64_t num, std::int64_t den, int depth) const {
    return evaluate(num, den, depth);
}

SpherePoint CircleConjugacy::operator()(double theta, int depth) const {
    theta = wrap01(theta);
    const __int128 den = static_cast<__int128>(1) << 62;
    return evaluate(static_cast<__int128>(std::ldexp(theta, 62)), den, depth);
}

SpherePoint conjugacy_h(const FactorCircleMap& F, double theta, int depth) {
    return CircleConjugacy(F)(theta, depth);
}

} // namespace corrmate
