#pragma once

#include "corrmate/config.hpp"
#include "corrmate/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace corrmate {

/// (z,w) in C  iff  (R(w) - R(1/z)) / (w - 1/z) = 0. Bi-degree d:d with d = deg R - 1.
class Correspondence {
public:
    explicit Correspondence(RationalMap R, Config cfg = {});

    const RationalMap& map() const { return R_; }
    const Config& config() const { return cfg_; }
    int d() const { return R_.degree() - 1; }
    SpherePoint marked_point() const { return SpherePoint(1.0); }

    /// All w with R(w) = R(1/z), one copy of w = 1/z removed. Multiplicities sum to d.
    std::vector<FiberPoint> forward(const SpherePoint& z) const;
    /// All z = 1/zeta with R(zeta) = R(w), one copy of zeta = w removed.
    std::vector<FiberPoint> backward(const SpherePoint& w) const;

    /// Residual of the defining relation at a pair, chordal: distance from w to the deflated fiber.
    double relation_defect(const SpherePoint& z, const SpherePoint& w) const;

private:
    RationalMap R_;
    Config cfg_;
};

/// Fiber of R over R(x) with one copy of x removed. Throws RootFindingError if no fiber point
/// lies within 1e-6 (chordal) of x.
std::vector<FiberPoint> deflated_fiber(const RationalMap& R, const SpherePoint& x, const Config& cfg = {});

/// Chordal distance from x to the nearest point of a set.
double distance_to_set(const SpherePoint& x, const std::vector<SpherePoint>& set);

struct CloudPoint {
    SpherePoint z;
    int rank = 0; // word length from the marked point
};

/// Random compositions of the 2d branches starting at 1 (restarted every `restart` steps), plus all
/// backward fibers of 1 up to depth `bfs_depth`. Deterministic in the seed.
std::vector<CloudPoint> grand_orbit_cloud(const Correspondence& C, int budget, std::uint64_t seed,
                                          int bfs_depth = 4, int restart = 64);

/// Fraction of points p whose image 1/p lies within `radius` (chordal) of the cloud.
double cloud_eta_symmetry(const std::vector<CloudPoint>& cloud, double radius);

/// Fraction of the points of `a` within `radius` (chordal) of some point of `b`.
double cloud_coverage(const std::vector<CloudPoint>& a, const std::vector<CloudPoint>& b, double radius);

/// The Jordan curve bounding the domain on which R is injective, together with the side that
/// contains infinity. Either the unit circle or a closed polygon.
struct DomainSpec {
    enum class Kind { UnitCircle, Polygon };
    Kind kind = Kind::UnitCircle;
    std::vector<Complex> polygon; // vertices, closed implicitly

    static DomainSpec unit_circle() { return {}; }
    static DomainSpec from_polygon(std::vector<Complex> vertices);

    /// Closed domain containing infinity.
    bool contains(const SpherePoint& z, double eps = 0.0) const;
    /// Signed margin: positive inside the domain, negative outside, zero on the curve.
    double margin(const SpherePoint& z) const;
    /// Uniform samples of the curve.
    std::vector<Complex> sample(int count) const;
};

struct DomainAudit {
    bool eta_invariant = false;
    bool injective = false;
    int boundary_critical = 0;     // simple critical points on the curve
    double hausdorff_eta = 0.0;    // chordal distance between the curve and its image under 1/z
    std::string detail;
    bool passed(int p) const { return eta_invariant && injective && boundary_critical == p; }
};

/// Samples the curve: eta-invariance, injectivity of R on it (simple image polygon) and the
/// number of critical points on it.
DomainAudit audit_domain(const RationalMap& R, const DomainSpec& dom, int samples = 2048, double tol = 1e-6);

enum class Label : std::uint8_t { Tiling = 0, K1 = 1, K2 = 2, Limit = 3, Undecided = 4 };

const char* label_name(Label l);

struct Classification {
    Label label = Label::Undecided;
    int rank = 0;        // steps taken before the decision
    double margin = 0.0; // smallest uniqueness margin of the selected fiber points
};

/// Iterates F = R o eta o (R restricted to the domain)^-1 on w = R(z). Leaving R(domain) decides
/// tiling; reaching |w| > escape (the superattracting basin of infinity) decides K.
class Classifier {
public:
    /// Audits the domain once; throws AuditError if R is not injective on the curve or the curve is
    /// not eta-invariant.
    Classifier(Correspondence C, DomainSpec dom, int p, int max_iter = 200);
    /// Skips the audit (the caller vouches for the domain).
    static Classifier unaudited(Correspondence C, DomainSpec dom, int max_iter = 200);

    const Correspondence& correspondence() const { return C_; }
    const DomainSpec& domain() const { return dom_; }
    const DomainAudit& audit() const { return audit_; }
    int max_iter() const { return max_iter_; }

    Classification classify(const SpherePoint& z) const;
    Classification classify(const SpherePoint& z, int max_iter) const;

    /// The fiber point of w in the closed domain, or nothing. `margin` receives the gap to the
    /// runner-up (in the domain's margin units).
    std::optional<SpherePoint> domain_preimage(const SpherePoint& w, double* margin = nullptr) const;

    double escape_radius = 1e6;

private:
    Classifier(Correspondence C, DomainSpec dom, int max_iter, DomainAudit audit);
    Correspondence C_;
    DomainSpec dom_;
    int max_iter_;
    DomainAudit audit_;
};

Label classify_point(const Correspondence& C, const SpherePoint& z, const DomainSpec& dom, int p, int max_iter = 200);

/// The deck transformation of the tiling set, built from local coordinates w_j = k_j^(1/n) (z - x_j)
/// at the p critical points x_j of multiplicity n-1, k_j = R^(n)(x_j)/n!. tau sends chart j to
/// chart j+1, and chart p-1 to chart 0 rotated by exp(2 pi i/n).
class DeckTransform {
public:
    /// Throws AuditError if R lacks p critical points of multiplicity n-1 with a common value.
    DeckTransform(const RationalMap& R, int n, int p, const Config& cfg = {});

    int n() const { return n_; }
    int p() const { return p_; }
    const std::vector<Complex>& centers() const { return x_; }
    double trust_radius() const { return cfg_.trust_radius; }

    /// Index of the chart whose center is within the trust radius, or -1.
    int chart_of(Complex z) const;

    /// Radius around center j below which the n fiber points near it cannot be separated in
    /// double precision; there the local model itself is returned.
    double resolution_radius(int j) const { return rho_[j]; }

    /// tau^k(z) for z within the trust radius of a center. Throws DomainError outside it, and
    /// RootFindingError if the fiber point cannot be told apart.
    Complex apply(Complex z, int k = 1) const;

    /// tau^k continued along a path whose first point is within the trust radius. The path is
    /// subdivided as needed and the image of every subdivision point is returned, so the result
    /// is itself a usable path.
    std::vector<Complex> along(const std::vector<Complex>& path, int k = 1) const;

private:
    RationalMap R_;
    Config cfg_;
    int n_, p_;
    std::vector<Complex> x_;
    std::vector<Complex> kappa_;
    std::vector<double> rho_;
};

Complex deck_tau(const RationalMap& R, Complex z, int n, int p, const Config& cfg = {});

struct Witness {
    MobiusMap M;  // in the centralizer of 1/z
    MobiusMap M2; // R1 = M2 o R2 o M
    double residual;
};

struct EquivalenceResult {
    std::vector<Witness> witnesses; // all, closest to the identity first
    bool ambiguous() const { return witnesses.size() > 1; }
    std::optional<Witness> best() const {
        if (witnesses.empty()) return std::nullopt;
        return witnesses.front();
    }
};

/// Searches M with M(1/z) = 1/M(z) and a Mobius M2 such that R1 = M2 o R2 o M, by matching
/// critical points. Verified on samples to 1e-8 (chordal).
EquivalenceResult are_equivalent(const Correspondence& C1, const Correspondence& C2);

/// Maps commuting with z -> 1/z: (az+b)/(bz+a) and (az-b)/(bz-a).
bool commutes_with_eta(const MobiusMap& M, double tol = 1e-10);

struct PingPongReport {
    int words = 0;            // non-identity reduced words checked
    int samples = 0;
    double min_displacement = 0.0; // over all words and samples, chordal
    std::string worst_word;
    double eta_relation = 0.0; // max chordal defect of eta^2
    double tau_relation = 0.0; // max chordal defect of tau^(np)
    std::vector<std::string> violations;
    bool passed = false;
};

/// Words in eta and tau acting on sample points of the tiling set. Each sample carries a path from
/// a chart center; eta is continued by prepending `base_path` (from a point near the chart center to
/// its image under 1/z), tau by continuation along the carried path. The default base path is the
/// straight segment, built only for p = 1.
PingPongReport pingpong_check(const RationalMap& R, int n, int p, const std::vector<Complex>& samples,
                              int max_word_len = 6, double delta = 1e-4,
                              std::vector<Complex> base_path = {}, const Config& cfg = {});

} // namespace corrmate
