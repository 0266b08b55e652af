#include "corrmate/correspondence.hpp"

#include "corrmate/bers.hpp"
#include "corrmate/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

namespace corrmate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Buckets points of the unit sphere on a cubic grid of the given cell size, so chordal
// neighbourhoods of that radius touch at most 27 cells.
class SphereHash {
public:
    explicit SphereHash(double cell) : cell_(cell) {}

    void insert(const SpherePoint& z) {
        const auto s = z.to_unit_sphere();
        pts_.push_back(s);
        cells_[key(s)].push_back(pts_.size() - 1);
    }

    double nearest_within(const SpherePoint& z, double radius) const {
        const auto s = z.to_unit_sphere();
        const auto c = cell_of(s);
        double best = kInf;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(pack({c[0] + dx, c[1] + dy, c[2] + dz}));
                    if (it == cells_.end()) continue;
                    for (auto i : it->second) {
                        const auto& q = pts_[i];
                        const double d = std::sqrt((q[0] - s[0]) * (q[0] - s[0]) + (q[1] - s[1]) * (q[1] - s[1]) +
                                                   (q[2] - s[2]) * (q[2] - s[2]));
                        best = std::min(best, d);
                    }
                }
        return best <= radius ? best : kInf;
    }

private:
    std::array<long, 3> cell_of(const std::array<double, 3>& s) const {
        return {static_cast<long>(std::floor(s[0] / cell_)), static_cast<long>(std::floor(s[1] / cell_)),
                static_cast<long>(std::floor(s[2] / cell_))};
    }
    static std::uint64_t pack(const std::array<long, 3>& c) {
        return (static_cast<std::uint64_t>(c[0] + (1 << 20)) << 42) ^ (static_cast<std::uint64_t>(c[1] + (1 << 20)) << 21) ^
               static_cast<std::uint64_t>(c[2] + (1 << 20));
    }
    std::uint64_t key(const std::array<double, 3>& s) const { return pack(cell_of(s)); }

    double cell_;
    std::vector<std::array<double, 3>> pts_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double segment_distance(Complex z, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0 ? (std::conj(ab) * (z - a)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

bool inside_polygon(const std::vector<Complex>& poly, Complex z) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Complex a = poly[i], b = poly[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double x = (b.real() - a.real()) * (z.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
            if (z.real() < x) in = !in;
        }
    }
    return in;
}

double polygon_distance(const std::vector<Complex>& poly, Complex z) {
    double best = kInf;
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, segment_distance(z, poly[i], poly[(i + 1) % poly.size()]));
    return best;
}

// Unclustered fiber for the classification loop; degree lost at infinity goes to infinity.
std::vector<SpherePoint> fast_fiber(const RationalMap& R, const SpherePoint& w) {
    Poly q = w.is_infinite() ? R.den() : poly_sub(R.num(), poly_scale(R.den(), w.value()));
    q = poly_trim(q, 1e-14);
    std::vector<SpherePoint> out;
    for (const auto& r : aberth_roots(q)) out.push_back(r);
    while (static_cast<int>(out.size()) < R.degree()) out.push_back(SpherePoint::infinity());
    return out;
}

} // namespace

// ---------------------------------------------------------------------------------------------
// branches

Correspondence::Correspondence(RationalMap R, Config cfg) : R_(std::move(R)), cfg_(cfg) {
    cfg_.validate();
    if (R_.degree() < 2) throw DegenerateError("correspondence needs deg R >= 2");
}

std::vector<FiberPoint> deflated_fiber(const RationalMap& R, const SpherePoint& x, const Config& cfg) {
    auto fiber = solve_preimages(R, R(x), cfg);
    std::size_t best = fiber.size();
    double dist = kInf;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        const double d = chordal_distance(fiber[i].point, x);
        if (d < dist) {
            dist = d;
            best = i;
        }
    }
    if (best == fiber.size() || dist > 1e-6) throw RootFindingError("deflation point is not in its own fiber");
    if (--fiber[best].multiplicity == 0) fiber.erase(fiber.begin() + static_cast<long>(best));
    return fiber;
}

std::vector<FiberPoint> Correspondence::forward(const SpherePoint& z) const {
    return deflated_fiber(R_, eta(z), cfg_);
}

std::vector<FiberPoint> Correspondence::backward(const SpherePoint& w) const {
    auto fiber = deflated_fiber(R_, w, cfg_);
    for (auto& f : fiber) f.point = eta(f.point);
    return fiber;
}

double Correspondence::relation_defect(const SpherePoint& z, const SpherePoint& w) const {
    return distance_to_set(w, flatten(forward(z)));
}

double distance_to_set(const SpherePoint& x, const std::vector<SpherePoint>& set) {
    double best = kInf;
    for (const auto& s : set) best = std::min(best, chordal_distance(x, s));
    return best;
}

// ---------------------------------------------------------------------------------------------
// grand orbit

std::vector<CloudPoint> grand_orbit_cloud(const Correspondence& C, int budget, std::uint64_t seed, int bfs_depth,
                                          int restart) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    std::vector<CloudPoint> out;
    out.push_back({C.marked_point(), 0});

    // breadth-first backward fibers, capped at a quarter of the budget
    std::vector<SpherePoint> layer{C.marked_point()};
    const std::size_t bfs_cap = static_cast<std::size_t>(std::max(1, budget / 4));
    for (int depth = 1; depth <= bfs_depth && out.size() < bfs_cap; ++depth) {
        std::vector<SpherePoint> next;
        for (const auto& z : layer) {
            std::vector<SpherePoint> pts;
            try {
                pts = flatten(C.backward(z));
            } catch (const RootFindingError&) {
                continue;
            }
            for (const auto& w : pts) {
                if (out.size() >= bfs_cap) break;
                next.push_back(w);
                out.push_back({w, depth});
            }
        }
        layer = std::move(next);
    }

    std::mt19937_64 rng(seed);
    SpherePoint z = C.marked_point();
    int rank = 0;
    while (static_cast<int>(out.size()) < budget) {
        if (rank >= restart) {
            z = C.marked_point();
            rank = 0;
        }
        const bool fwd = (rng() & 1u) != 0;
        std::vector<SpherePoint> branch;
        try {
            branch = flatten(fwd ? C.forward(z) : C.backward(z));
        } catch (const RootFindingError&) {
            rank = restart;
            continue;
        }
        if (branch.empty()) {
            rank = restart;
            continue;
        }
        z = branch[rng() % branch.size()];
        ++rank;
        out.push_back({z, rank});
    }
    return out;
}

double cloud_eta_symmetry(const std::vector<CloudPoint>& cloud, double radius) {
    if (cloud.empty()) return 1.0;
    SphereHash hash(radius);
    for (const auto& c : cloud) hash.insert(c.z);
    std::size_t hit = 0;
    for (const auto& c : cloud)
        if (hash.nearest_within(eta(c.z), radius) <= radius) ++hit;
    return static_cast<double>(hit) / static_cast<double>(cloud.size());
}

double cloud_coverage(const std::vector<CloudPoint>& a, const std::vector<CloudPoint>& b, double radius) {
    if (a.empty()) return 1.0;
    SphereHash hash(radius);
    for (const auto& c : b) hash.insert(c.z);
    std::size_t hit = 0;
    for (const auto& c : a)
        if (hash.nearest_within(c.z, radius) <= radius) ++hit;
    return static_cast<double>(hit) / static_cast<double>(a.size());
}

// ---------------------------------------------------------------------------------------------
// domain

DomainSpec DomainSpec::from_polygon(std::vector<Complex> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    DomainSpec d;
    d.kind = Kind::Polygon;
    d.polygon = std::move(vertices);
    return d;
}

double DomainSpec::margin(const SpherePoint& z) const {
    if (z.is_infinite()) return kInf;
    if (kind == Kind::UnitCircle) return std::abs(z.value()) - 1.0;
    const double dist = polygon_distance(polygon, z.value());
    return inside_polygon(polygon, z.value()) ? -dist : dist;
}

bool DomainSpec::contains(const SpherePoint& z, double eps) const { return margin(z) >= -eps; }

std::vector<Complex> DomainSpec::sample(int count) const {
    std::vector<Complex> out;
    out.reserve(count);
    if (kind == Kind::UnitCircle) {
        for (int k = 0; k < count; ++k) out.push_back(std::polar(1.0, 2.0 * kPi * k / count));
        return out;
    }
    double perimeter = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) perimeter += std::abs(polygon[(i + 1) % polygon.size()] - polygon[i]);
    std::size_t edge = 0;
    double edge_start = 0.0;
    for (int k = 0; k < count; ++k) {
        const double s = perimeter * k / count;
        while (edge + 1 < polygon.size() &&
               edge_start + std::abs(polygon[(edge + 1) % polygon.size()] - polygon[edge]) < s) {
            edge_start += std::abs(polygon[(edge + 1) % polygon.size()] - polygon[edge]);
            ++edge;
        }
        const Complex a = polygon[edge], b = polygon[(edge + 1) % polygon.size()];
        const double len = std::abs(b - a);
        out.push_back(len > 0 ? a + (b - a) * ((s - edge_start) / len) : a);
    }
    return out;
}

DomainAudit audit_domain(const RationalMap& R, const DomainSpec& dom, int samples, double tol) {
    DomainAudit a;
    const auto pts = dom.sample(samples);

    for (const auto& s : pts) {
        const SpherePoint e = eta(s);
        const double off = e.is_infinite() ? kInf : std::abs(dom.margin(e));
        a.hausdorff_eta = std::max(a.hausdorff_eta, off);
    }
    // the curve itself for the circle; for a polygon, sampling resolution
    a.eta_invariant = a.hausdorff_eta <= (dom.kind == DomainSpec::Kind::UnitCircle ? 1e-12 : 1e-3);

    std::vector<Complex> img;
    a.injective = true;
    for (const auto& s : pts) {
        const SpherePoint w = R(s);
        if (w.is_infinite()) {
            a.injective = false;
            break;
        }
        img.push_back(w.value());
    }
    if (a.injective) {
        const std::size_t m = img.size();
        for (std::size_t i = 0; i < m && a.injective; ++i)
            for (std::size_t j = i + 2; j < m; ++j) {
                if (i == 0 && j == m - 1) continue;
                if (segments_cross(img[i], img[(i + 1) % m], img[j], img[(j + 1) % m])) {
                    a.injective = false;
                    break;
                }
            }
    }

    for (const auto& cp : critical_points(R))
        if (cp.point.is_finite() && cp.multiplicity == 1 && std::abs(dom.margin(cp.point)) <= tol) ++a.boundary_critical;

    std::ostringstream os;
    os << "eta defect " << a.hausdorff_eta << ", image " << (a.injective ? "simple" : "not simple") << ", "
       << a.boundary_critical << " critical points on the curve";
    a.detail = os.str();
    return a;
}

// ---------------------------------------------------------------------------------------------
// classification

const char* label_name(Label l) {
    switch (l) {
    case Label::Tiling: return "tiling";
    case Label::K1: return "K1";
    case Label::K2: return "K2";
    case Label::Limit: return "limit";
    case Label::Undecided: return "undecided";
    }
    return "?";
}

Classifier::Classifier(Correspondence C, DomainSpec dom, int max_iter, DomainAudit audit)
    : C_(std::move(C)), dom_(std::move(dom)), max_iter_(max_iter), audit_(std::move(audit)) {
    if (max_iter_ < 1) throw std::invalid_argument("max_iter must be >= 1");
}

Classifier::Classifier(Correspondence C, DomainSpec dom, int p, int max_iter)
    : Classifier(C, dom, max_iter, audit_domain(C.map(), dom)) {
    if (!audit_.passed(p)) throw AuditError("domain audit failed: " + audit_.detail);
}

Classifier Classifier::unaudited(Correspondence C, DomainSpec dom, int max_iter) {
    return Classifier(std::move(C), std::move(dom), max_iter, DomainAudit{});
}

std::optional<SpherePoint> Classifier::domain_preimage(const SpherePoint& w, double* margin) const {
    const auto fiber = fast_fiber(C_.map(), w);
    double best = -kInf, second = -kInf;
    std::size_t bi = fiber.size();
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        const double m = dom_.margin(fiber[i]);
        if (m > best) {
            second = best;
            best = m;
            bi = i;
        } else if (m > second) {
            second = m;
        }
    }
    if (margin) *margin = best == kInf && second == kInf ? 0.0 : best - second;
    if (bi == fiber.size() || best < -C_.config().epsilon) return std::nullopt;
    return fiber[bi];
}

Classification Classifier::classify(const SpherePoint& z) const { return classify(z, max_iter_); }

Classification Classifier::classify(const SpherePoint& z, int max_iter) const {
    Classification out;
    out.margin = kInf;
    const bool inside = dom_.contains(z);
    const Label K = inside ? Label::K1 : Label::K2;
    const double ambiguous = 10.0 * C_.config().root_tol;
    SpherePoint w = C_.map()(z);
    for (int it = 0; it < max_iter; ++it) {
        if (w.is_infinite() || std::abs(w.value()) > escape_radius) {
            out.label = K;
            out.rank = it;
            return out;
        }
        double m = 0.0;
        const auto u = domain_preimage(w, &m);
        if (!u) {
            out.label = Label::Tiling;
            out.rank = it;
            return out;
        }
        out.margin = std::min(out.margin, m);
        if (m < ambiguous) break; // two fiber points on the curve: next to the cusps
        w = C_.map()(eta(*u));
    }
    out.label = Label::Undecided;
    out.rank = max_iter;
    return out;
}

Label classify_point(const Correspondence& C, const SpherePoint& z, const DomainSpec& dom, int p, int max_iter) {
    return Classifier(C, dom, p, max_iter).classify(z).label;
}

// ---------------------------------------------------------------------------------------------
// deck transformation

DeckTransform::DeckTransform(const RationalMap& R, int n, int p, const Config& cfg) : R_(R), cfg_(cfg), n_(n), p_(p) {
    if (n < 2) throw AuditError("deck transformation needs critical points of multiplicity n-1 >= 1");
    const auto rep = validate_family(R, n, p, cfg);
    if (!rep.passed()) throw AuditError("critical audit failed: " + rep.first_failure());
    x_ = rep.tiling_critical;
    std::sort(x_.begin(), x_.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    for (const auto& x : x_) {
        const Complex k = R.derivative_k(x, n) / fact;
        if (std::abs(k) == 0.0) throw AuditError("degenerate local model at a tiling critical point");
        kappa_.push_back(std::pow(k, 1.0 / n));
        // roots of num - v den near x move by (eps |P| / |P^(n)(x)/n!|)^(1/n) under rounding
        const SpherePoint v = R(x);
        const Poly P = v.is_infinite() ? R.den() : poly_sub(R.num(), poly_scale(R.den(), v.value()));
        double pmax = 0.0, powsum = 0.0, xk = 1.0;
        for (const auto& c : P) {
            pmax = std::max(pmax, std::abs(c));
            powsum += xk;
            xk *= std::abs(x);
        }
        Poly dP = P;
        for (int i = 0; i < n; ++i) dP = poly_derivative(dP);
        const double tn = std::abs(poly_eval(dP, x)) / fact;
        rho_.push_back(tn > 0.0 ? 4.0 * std::pow(1e-16 * pmax * powsum / tn, 1.0 / n) : cfg_.trust_radius);
    }
}

int DeckTransform::chart_of(Complex z) const {
    for (std::size_t j = 0; j < x_.size(); ++j)
        if (std::abs(z - x_[j]) <= cfg_.trust_radius) return static_cast<int>(j);
    return -1;
}

Complex DeckTransform::apply(Complex z, int k) const {
    const int j = chart_of(z);
    if (j < 0) throw DomainError("point outside the trust radius of the deck transformation");
    const int np = n_ * p_;
    k = ((k % np) + np) % np;
    const int t = (j + k) % p_;
    const int turns = (j + k) / p_;
    const Complex w = kappa_[j] * (z - x_[j]);
    if (std::abs(w) <= 1e-14) return x_[t];
    const Complex target = x_[t] + std::polar(1.0, 2.0 * kPi * turns / n_) * w / kappa_[t];
    if (k == 0) return z;

    // below the resolution radius the model error O(|z - x|^2) is smaller than the rounding error
    // of any computed fiber point
    if (std::abs(z - x_[j]) < rho_[j]) return target;

    const auto fiber = fast_fiber(R_, R_(z));
    double d1 = kInf, d2 = kInf;
    Complex best = target;
    for (const auto& f : fiber) {
        if (f.is_infinite()) continue;
        const double d = std::abs(f.value() - target);
        if (d < d1) {
            d2 = d1;
            d1 = d;
            best = f.value();
        } else if (d < d2) {
            d2 = d;
        }
    }
    if (!(d1 < 0.5 * d2)) throw RootFindingError("deck transformation: fiber points too close to tell apart");
    return best;
}

std::vector<Complex> DeckTransform::along(const std::vector<Complex>& path, int k) const {
    if (path.empty()) return {};
    std::vector<Complex> image{apply(path[0], k)};
    if (((k % (n_ * p_)) + n_ * p_) % (n_ * p_) == 0) {
        image.assign(path.begin(), path.end());
        return image;
    }
    const Poly dnum = poly_derivative(R_.num()), dden = poly_derivative(R_.den());
    const double max_step = 0.25 * cfg_.trust_radius;

    // Newton on num(u) - v den(u) = 0 from the predicted point
    auto correct = [&](Complex guess, Complex v, Complex& out) {
        Complex u = guess;
        for (int it = 0; it < 30; ++it) {
            const Complex f = poly_eval(R_.num(), u) - v * poly_eval(R_.den(), u);
            const Complex df = poly_eval(dnum, u) - v * poly_eval(dden, u);
            if (df == Complex(0.0)) return false;
            const Complex step = f / df;
            u -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(u))) {
                out = u;
                return true;
            }
        }
        out = u;
        return std::abs(poly_eval(R_.num(), u) - v * poly_eval(R_.den(), u)) <=
               1e-12 * (1.0 + std::abs(v)) * (1.0 + std::abs(poly_eval(R_.den(), u)));
    };

    Complex a = path[0], ta = image[0];
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Complex b = path[i];
        while (a != b) {
            Complex h = b - a;
            if (std::abs(h) > max_step) h *= max_step / std::abs(h);
            bool ok = false;
            for (int halvings = 0; halvings < 40 && !ok; ++halvings, h *= 0.5) {
                const Complex next = (std::abs(b - a - h) <= 1e-15 * (1.0 + std::abs(b))) ? b : a + h;
                const SpherePoint v = R_(next);
                const SpherePoint da = R_.derivative(a), dta = R_.derivative(ta);
                if (v.is_infinite() || da.is_infinite() || dta.is_infinite() || dta.value() == Complex(0.0)) continue;
                const Complex slope = da.value() / dta.value();
                const Complex predicted = ta + slope * (next - a);
                Complex u;
                if (!correct(predicted, v.value(), u)) continue;
                const double jump = std::abs(u - predicted);
                const double move = std::abs(predicted - ta);
                if (jump > 0.1 * move + 1e-12 || std::abs(u - ta) > max_step) continue;
                a = next;
                ta = u;
                ok = true;
            }
            if (!ok) throw RootFindingError("deck transformation: continuation lost track");
            image.push_back(ta);
        }
    }
    return image;
}

Complex deck_tau(const RationalMap& R, Complex z, int n, int p, const Config& cfg) {
    return DeckTransform(R, n, p, cfg).apply(z, 1);
}

// ---------------------------------------------------------------------------------------------
// equivalence

bool commutes_with_eta(const MobiusMap& M, double tol) {
    return (MobiusMap::eta() * M).distance(M * MobiusMap::eta()) <= tol;
}

namespace {

// The centralizer maps sending c to c'. Empty when the pair does not pin one down.
std::vector<MobiusMap> centralizer_candidates(const SpherePoint& c, const SpherePoint& cp) {
    std::vector<std::pair<Complex, Complex>> ab1, ab2; // (a:b) for the two types
    if (c.is_infinite() && cp.is_infinite()) {
        ab1.push_back({1.0, 0.0});
        ab2.push_back({1.0, 0.0});
    } else if (c.is_infinite()) {
        ab1.push_back({cp.value(), 1.0});
        ab2.push_back({cp.value(), 1.0});
    } else if (cp.is_infinite()) {
        ab1.push_back({-c.value(), 1.0});
        ab2.push_back({c.value(), 1.0});
    } else {
        const Complex x = c.value(), y = cp.value();
        ab1.push_back({y * x - 1.0, x - y});
        ab2.push_back({1.0 + x * y, x + y});
    }
    std::vector<MobiusMap> out;
    for (auto [a, b] : ab1) {
        const double s = std::max(std::abs(a), std::abs(b));
        if (s == 0.0 || std::abs(a * a - b * b) <= 1e-10 * s * s) continue;
        out.emplace_back(a / s, b / s, b / s, a / s);
    }
    for (auto [a, b] : ab2) {
        const double s = std::max(std::abs(a), std::abs(b));
        if (s == 0.0 || std::abs(a * a - b * b) <= 1e-10 * s * s) continue;
        out.emplace_back(a / s, -b / s, b / s, -a / s);
    }
    return out;
}

} // namespace

EquivalenceResult are_equivalent(const Correspondence& C1, const Correspondence& C2) {
    EquivalenceResult res;
    const RationalMap& R1 = C1.map();
    const RationalMap& R2 = C2.map();
    if (R1.degree() != R2.degree()) return res;

    const auto cp1 = critical_points(R1, C1.config());
    const auto cp2 = critical_points(R2, C2.config());

    // sample points where neither side is singular
    std::vector<Complex> probes;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 24; ++i) probes.emplace_back(u(rng), u(rng));

    auto verify = [&](const MobiusMap& M) -> std::optional<Witness> {
        std::vector<std::pair<SpherePoint, SpherePoint>> pairs; // (R2(M z), R1(z))
        for (const auto& z : probes) pairs.push_back({R2(M(z)), R1(z)});
        // three probes with distinct values on both sides
        std::array<std::size_t, 3> idx{};
        std::size_t found = 0;
        for (std::size_t i = 0; i < pairs.size() && found < 3; ++i) {
            bool distinct = true;
            for (std::size_t k = 0; k < found; ++k)
                distinct = distinct && chordal_distance(pairs[i].first, pairs[idx[k]].first) > 1e-3 &&
                           chordal_distance(pairs[i].second, pairs[idx[k]].second) > 1e-3;
            if (distinct) idx[found++] = i;
        }
        if (found < 3) return std::nullopt;
        MobiusMap M2 = MobiusMap::identity();
        try {
            M2 = MobiusMap::from_three_points({pairs[idx[0]].first, pairs[idx[1]].first, pairs[idx[2]].first},
                                              {pairs[idx[0]].second, pairs[idx[1]].second, pairs[idx[2]].second});
        } catch (const DegenerateError&) {
            return std::nullopt;
        }
        double residual = 0.0;
        for (const auto& [s, t] : pairs) residual = std::max(residual, chordal_distance(M2(s), t));
        if (residual > 1e-8) return std::nullopt;
        return Witness{M.normalized(), M2.normalized(), residual};
    };

    for (const auto& c1 : cp1)
        for (const auto& c2 : cp2) {
            if (c1.multiplicity != c2.multiplicity) continue;
            for (const auto& M : centralizer_candidates(c1.point, c2.point)) {
                const auto w = verify(M);
                if (!w) continue;
                bool seen = false;
                for (const auto& x : res.witnesses) seen = seen || x.M.distance(w->M) <= 1e-6;
                if (!seen) res.witnesses.push_back(*w);
            }
        }
    const MobiusMap id = MobiusMap::identity();
    std::sort(res.witnesses.begin(), res.witnesses.end(),
              [&](const Witness& a, const Witness& b) { return a.M.distance(id) < b.M.distance(id); });
    return res;
}

// ---------------------------------------------------------------------------------------------
// ping-pong

namespace {

std::string word_string(const std::vector<int>& word) {
    if (word.empty()) return "id";
    std::string s;
    for (int l : word) {
        if (!s.empty()) s += " ";
        s += l == 0 ? std::string("eta") : "tau^" + std::to_string(l);
    }
    return s;
}

} // namespace

PingPongReport pingpong_check(const RationalMap& R, int n, int p, const std::vector<Complex>& samples,
                              int max_word_len, double delta, std::vector<Complex> base_path, const Config& cfg) {
    const DeckTransform tau(R, n, p, cfg);
    if (p != 1 && base_path.empty()) throw DomainError("ping-pong paths are built in only for p = 1");
    const Complex x0 = tau.centers()[0];
    if (base_path.empty()) {
        // straight segment from next to the center to its image under 1/z
        const Complex far = 1.0 / x0;
        base_path = {x0 + 0.5 * tau.trust_radius() * (far - x0) / std::abs(far - x0), far};
    }
    if (tau.chart_of(base_path.front()) < 0) throw DomainError("base path must start inside the trust radius");

    using Path = std::vector<Complex>;
    auto apply_eta = [&](const Path& path) {
        Path out(base_path);
        for (const auto& z : path) {
            const SpherePoint e = eta(z);
            if (e.is_infinite()) throw DomainError("path through 0");
            out.push_back(e.value());
        }
        return out;
    };

    PingPongReport rep;
    rep.samples = static_cast<int>(samples.size());
    rep.min_displacement = kInf;
    const int np = n * p;

    std::vector<Path> start;
    for (const auto& z : samples) {
        if (tau.chart_of(z) < 0) throw DomainError("ping-pong samples must lie inside the trust radius");
        start.push_back({z});
    }

    // relations
    for (const auto& z : samples) {
        rep.eta_relation = std::max(rep.eta_relation, chordal_distance(eta(eta(z)), z));
        Path path{z};
        for (int k = 0; k < np; ++k) path = tau.along(path, 1);
        rep.tau_relation = std::max(rep.tau_relation, chordal_distance(path.back(), z));
    }

    // depth-first over reduced words; letters are prepended on the left
    std::vector<int> word;
    std::function<void(const std::vector<Path>&, int)> visit = [&](const std::vector<Path>& state, int last) {
        if (!word.empty()) {
            ++rep.words;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double d = chordal_distance(state[i].back(), samples[i]);
                if (d < rep.min_displacement) {
                    rep.min_displacement = d;
                    rep.worst_word = word_string(word);
                }
                if (d <= delta) {
                    std::ostringstream os;
                    os << word_string(word) << " moves sample " << i << " by " << d;
                    rep.violations.push_back(os.str());
                }
            }
        }
        if (static_cast<int>(word.size()) >= max_word_len) return;
        for (int letter = 0; letter < np; ++letter) {
            if (last >= 0 && ((letter == 0) == (last == 0))) continue;
            std::vector<Path> next;
            next.reserve(state.size());
            for (const auto& path : state) next.push_back(letter == 0 ? apply_eta(path) : tau.along(path, letter));
            word.insert(word.begin(), letter);
            visit(next, letter);
            word.erase(word.begin());
        }
    };
    visit(start, -1);

    rep.passed = rep.violations.empty() && rep.eta_relation <= 1e-8 && rep.tau_relation <= 1e-8;
    return rep;
}

} // namespace corrmate
