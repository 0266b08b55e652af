#include "corrmate/polynomial.hpp"

#include "corrmate/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrmate {

int degree(const Poly& p) {
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
        if (p[k] != Complex(0.0)) return k;
    return -1;
}

Complex poly_eval(const Poly& p, Complex z) {
    Complex acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_scale(b, -1.0)); }

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {0.0};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_scale(const Poly& a, Complex s) {
    Poly r(a);
    for (auto& c : r) c *= s;
    return r;
}

Poly poly_pow(const Poly& a, int k) {
    Poly r{1.0};
    for (int i = 0; i < k; ++i) r = poly_mul(r, a);
    return r;
}

Poly poly_from_roots(const std::vector<Complex>& roots) {
    Poly r{1.0};
    for (const Complex& x : roots) r = poly_mul(r, Poly{-x, 1.0});
    return r;
}

Poly poly_trim(Poly p, double rel_tol) {
    double scale = 0.0;
    for (const auto& c : p) scale = std::max(scale, std::abs(c));
    while (p.size() > 1 && std::abs(p.back()) <= rel_tol * scale) p.pop_back();
    if (p.empty()) p.push_back(0.0);
    return p;
}

Poly deflate(const Poly& p, Complex a) {
    const int n = degree(p);
    if (n <= 0) return {0.0};
    Poly q(n, 0.0);
    if (std::abs(a) <= 1.0) {
        q[n - 1] = p[n];
        for (int k = n - 1; k >= 1; --k) q[k - 1] = p[k] + a * q[k];
    } else {
        // from the constant term upwards: p_0 = -a q_0, p_k = q_{k-1} - a q_k
        q[0] = -p[0] / a;
        for (int k = 1; k < n; ++k) q[k] = (q[k - 1] - p[k]) / a;
    }
    return q;
}

Poly poly_reverse(const Poly& p, int deg) {
    Poly r(deg + 1, 0.0);
    for (int k = 0; k <= deg && k < static_cast<int>(p.size()); ++k) r[deg - k] = p[k];
    return r;
}

namespace {

Complex newton_step(const Poly& p, const Poly& dp, Complex z) {
    const Complex f = poly_eval(p, z);
    const Complex df = poly_eval(dp, z);
    if (df == Complex(0.0)) return z;
    const Complex z1 = z - f / df;
    return std::abs(poly_eval(p, z1)) < std::abs(f) ? z1 : z;
}

// Perturbation radius of an m-fold root at c. The companion eigenvalues are exact for coefficients
// off by about eps max|p_k|, which moves the root by (eps max|p_k| sum|c|^k / |p^(m)(c)/m!|)^(1/m).
double merge_radius(const Poly& p, int m, Complex c, double base) {
    if (m <= 1) return base;
    const double r = std::abs(c);
    double pmax = 0.0, powsum = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        pmax = std::max(pmax, std::abs(*it));
        powsum = powsum * r + 1.0;
    }
    const double size = pmax * powsum;
    // Taylor coefficient of order m at c by repeated synthetic division
    Poly t = p;
    Complex tm = 0.0;
    for (int k = 0; k <= m; ++k) {
        Poly q(t.size() > 1 ? t.size() - 1 : 1, 0.0);
        Complex acc = t.back();
        for (int i = static_cast<int>(t.size()) - 2; i >= 0; --i) {
            q[i] = acc;
            acc = t[i] + c * acc;
        }
        if (k == m) tm = acc;
        t = q;
    }
    if (std::abs(tm) == 0.0) return base;
    return std::max(base, 10.0 * std::pow(1e-16 * size / std::abs(tm), 1.0 / m));
}

struct Cluster {
    std::vector<Complex> members;
    Complex centroid() const {
        Complex s = 0.0;
        for (const auto& x : members) s += x;
        return s / static_cast<double>(members.size());
    }
    double spread(Complex c) const {
        double r = 0.0;
        for (const auto& x : members) r = std::max(r, std::abs(x - c));
        return r;
    }
};

} // namespace

std::vector<Root> find_roots(const Poly& p_in, double cluster_radius) {
    const Poly p = poly_trim(p_in);
    const int n = degree(p);
    if (n < 0) throw DegenerateError("roots of the zero polynomial");
    if (n == 0) return {};

    // exact zeros at the origin
    int zeros = 0;
    while (p[zeros] == Complex(0.0)) ++zeros;
    const Poly q(p.begin() + zeros, p.begin() + n + 1);
    const int m = n - zeros;

    std::vector<Complex> eig;
    if (m == 1) {
        eig.push_back(-q[0] / q[1]);
    } else if (m > 1) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) comp(i, m - 1) = -q[i] / q[m];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        if (es.info() != Eigen::Success) throw RootFindingError("companion eigenvalue solver did not converge");
        const Poly dq = poly_derivative(q);
        for (int i = 0; i < m; ++i) eig.push_back(newton_step(q, dq, es.eigenvalues()[i]));
    }

    // Largest groups first: m eigenvalues form an m-fold root when they are mutual nearest
    // neighbours, their spread fits the m-fold perturbation radius, and the next eigenvalue is
    // well separated.
    std::vector<Cluster> clusters;
    std::vector<bool> used(eig.size(), false);
    const int max_group = std::min<int>(8, static_cast<int>(eig.size()));
    for (int g = max_group; g >= 2; --g) {
        for (std::size_t i = 0; i < eig.size(); ++i) {
            if (used[i]) continue;
            std::vector<std::size_t> cand;
            for (std::size_t j = 0; j < eig.size(); ++j)
                if (!used[j]) cand.push_back(j);
            if (static_cast<int>(cand.size()) < g) break;
            std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(eig[a] - eig[i]) < std::abs(eig[b] - eig[i]);
            });
            Cluster c;
            for (int k = 0; k < g; ++k) c.members.push_back(eig[cand[k]]);
            const Complex centre = c.centroid();
            const double spread = c.spread(centre);
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t k = g; k < cand.size(); ++k) gap = std::min(gap, std::abs(eig[cand[k]] - centre));
            if (spread > merge_radius(q, g, centre, cluster_radius)) continue;
            if (spread > cluster_radius && gap <= 10.0 * spread) continue;
            for (int k = 0; k < g; ++k) used[cand[k]] = true;
            clusters.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < eig.size(); ++i)
        if (!used[i]) clusters.push_back({{eig[i]}});
    if (zeros > 0) {
        Cluster zc{std::vector<Complex>(zeros, 0.0)};
        for (auto it = clusters.begin(); it != clusters.end();) {
            if (std::abs(it->centroid()) <= cluster_radius) {
                zc.members.insert(zc.members.end(), it->members.begin(), it->members.end());
                it = clusters.erase(it);
            } else {
                ++it;
            }
        }
        clusters.insert(clusters.begin(), std::move(zc));
    }

    std::vector<Root> out;
    for (const auto& cl : clusters) {
        Root r;
        r.multiplicity = static_cast<int>(cl.members.size());
        r.value = cl.centroid();
        const double spread = cl.spread(r.value);
        if (r.multiplicity > 1 && !(zeros > 0 && r.value == Complex(0.0) && spread == 0.0)) {
            // an m-fold root is a simple root of the (m-1)th derivative
            Poly d = p;
            for (int k = 1; k < r.multiplicity; ++k) d = poly_derivative(d);
            const Poly dd = poly_derivative(d);
            Complex z = r.value;
            for (int it = 0; it < 3; ++it) z = newton_step(d, dd, z);
            if (std::abs(z - r.value) <= merge_radius(p, r.multiplicity, r.value, cluster_radius)) r.value = z;
        }
        if (r.multiplicity == 1 && !(zeros > 0 && r.value == Complex(0.0))) {
            const Poly dp = poly_derivative(p);
            for (int it = 0; it < 4; ++it) r.value = newton_step(p, dp, r.value);
        }
        r.ill_conditioned = spread > cluster_radius;
        out.push_back(r);
    }
    return out;
}

std::vector<Complex> find_roots_flat(const Poly& p, double cluster_radius) {
    std::vector<Complex> out;
    for (const auto& r : find_roots(p, cluster_radius)) out.insert(out.end(), r.multiplicity, r.value);
    return out;
}

std::vector<Complex> aberth_roots(const Poly& p_in, int max_iter) {
    const Poly p = poly_trim(p_in);
    const int n = degree(p);
    if (n < 0) throw DegenerateError("roots of the zero polynomial");
    if (n == 0) return {};
    if (n == 1) return {-p[0] / p[1]};
    const Poly dp = poly_derivative(p);

    // start on a circle of the Fujiwara radius, rotated off the real axis
    double bound = 0.0;
    for (int k = 0; k < n; ++k)
        bound = std::max(bound, std::pow(std::abs(p[k] / p[n]) / (k == 0 ? 2.0 : 1.0), 1.0 / (n - k)));
    bound = std::max(2.0 * bound, 1e-300);
    std::vector<Complex> z(n);
    for (int k = 0; k < n; ++k) z[k] = std::polar(0.5 * bound, 2.0 * kPi * (k + 0.25) / n);

    std::vector<bool> done(n, false);
    int converged = 0;
    for (int it = 0; it < max_iter && converged < n; ++it) {
        for (int k = 0; k < n; ++k) {
            if (done[k]) continue;
            const Complex f = poly_eval(p, z[k]);
            if (f == Complex(0.0)) {
                done[k] = true;
                ++converged;
                continue;
            }
            const Complex ratio = f / poly_eval(dp, z[k]);
            Complex s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            const Complex step = ratio / (1.0 - ratio * s);
            z[k] -= step;
            if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) return find_roots_flat(p);
            if (std::abs(step) <= 1e-14 * std::abs(z[k])) {
                done[k] = true;
                ++converged;
            }
        }
    }
    if (converged < n) {
        // clustered roots converge linearly; accept when the residual is at rounding level
        double scale = 0.0;
        for (const auto& c : p) scale = std::max(scale, std::abs(c));
        for (int k = 0; k < n; ++k) {
            if (done[k]) continue;
            double mag = 0.0, r = std::abs(z[k]);
            for (auto it = p.rbegin(); it != p.rend(); ++it) mag = mag * r + std::abs(*it);
            if (std::abs(poly_eval(p, z[k])) > 1e-10 * mag) return find_roots_flat(p);
        }
    }
    return z;
}

double multiple_root_backward_error(const Poly& p, Complex c, int m) {
    double pmax = 0.0;
    for (const auto& x : p) pmax = std::max(pmax, std::abs(x));
    if (pmax == 0.0) return 0.0;
    const double r = std::abs(c);
    // Taylor coefficients t_k at c; a perturbation dp moves t_k by at most
    // max|dp| sum_i binom(i,k) r^(i-k)
    Poly t = p;
    double worst = 0.0;
    for (int k = 0; k < m && !t.empty(); ++k) {
        Poly q(t.size() > 1 ? t.size() - 1 : 1, 0.0);
        Complex acc = t.back();
        for (int i = static_cast<int>(t.size()) - 2; i >= 0; --i) {
            q[i] = acc;
            acc = t[i] + c * acc;
        }
        double weight = 0.0, binom = 1.0, rp = 1.0;
        for (int i = k; i < static_cast<int>(p.size()); ++i) {
            weight += binom * rp;
            binom = binom * (i + 1) / (i + 1 - k);
            rp *= r;
        }
        worst = std::max(worst, std::abs(acc) / (pmax * weight));
        t = q;
    }
    return worst;
}

} // namespace corrmate
