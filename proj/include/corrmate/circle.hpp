#pragma once

#include "corrmate/fuchsian.hpp"
#include "corrmate/sphere.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace corrmate {

/// Argument of z in turns, in [0,1).
double turns_of(Complex z);
Complex from_turns(double t);

/// Piecewise Mobius map acting as g_{r,s} on the closed half-plane cut off by C_{r,s}.
class BowenSeriesMap {
public:
    explicit BowenSeriesMap(GroupData group, double eps = 1e-9);

    const GroupData& group() const { return group_; }

    /// (r,s) of the arc J_{r,s} containing the angle, arcs closed on their counter-clockwise start.
    std::pair<int, int> piece_of_turns(double t) const;

    /// Piece for z in the domain. Throws DomainError when z is inside the polygon or off the disk.
    std::pair<int, int> piece_of(const SpherePoint& z) const;

    SpherePoint operator()(const SpherePoint& z) const;

private:
    GroupData group_;
    double eps_;
};

/// A^fBS(z) = (A^BS(w))^n with w the n-th root of z with argument in [0, 2 pi/n).
class FactorCircleMap {
public:
    explicit FactorCircleMap(GroupData group, double eps = 1e-9);

    const BowenSeriesMap& base() const { return base_; }
    const GroupData& group() const { return base_.group(); }
    int n() const { return group().n(); }
    int p() const { return group().p(); }
    /// Covering degree np - 1 on the circle.
    int degree() const { return n() * p() - 1; }

    /// Principal n-th root, argument in [0, 2 pi/n).
    Complex principal_root(Complex z) const;

    /// Index s of the arc J_{1,s} whose xi-image [ (s-1)/p, s/p ) contains the angle.
    int piece_of_turns(double t) const;

    SpherePoint operator()(const SpherePoint& z) const;
    double map_turns(double t) const;

    /// The piece map of arc s evaluated at angle t (used for one-sided limits at breakpoints).
    double map_turns_on_piece(double t, int s) const;

    /// |derivative| of A^fBS at a circle point; equals |g'_{1,s}(w)|.
    double abs_derivative_turns(double t) const;

    /// All d preimages of a circle point, as angles in [0,1), sorted.
    std::vector<double> preimages_turns(double t) const;

private:
    BowenSeriesMap base_;
    double eps_;
};

struct FactorCriticalPoint {
    SpherePoint point;
    int multiplicity;
    SpherePoint value;
};

/// The p critical points (g_{1,s}^{-1}(0))^n of multiplicity n-1, all with value 0. Empty for n = 1.
std::vector<FactorCriticalPoint> critical_points_fbs(const FactorCircleMap& F);

struct LiftReport {
    int degree;          // rounded L(1) - L(0)
    double lift_defect;  // |L(1) - L(0) - degree|
    bool monotone;       // every sampled increment positive
    int samples;
};

/// Degree of the circle map from a continuous lift on a uniform grid.
LiftReport circle_lift(const FactorCircleMap& F, int samples = 1 << 16);

struct MarkovPartition {
    std::vector<double> breakpoints; // sorted angles in [0,1)
    std::size_t initial_count = 0;   // number of arcs before the pullback
    double max_endpoint_error = 0.0;
    bool is_markov = false;
    std::size_t pieces() const { return breakpoints.size(); }
};

/// Breakpoints: xi-images of the arc endpoints and of the points of each J_{1,s} sent to an n-th
/// root of unity, refined by one pullback. Throws AuditError if the Markov check fails.
MarkovPartition markov_partition(const FactorCircleMap& F, double tol = 1e-8);

struct ExpansivityReport {
    double lambda;
    int grid_per_piece;
    int pieces;
};

/// Minimum of |A'| over a midpoint grid on each piece. An estimate, not a certified bound:
/// |A'| tends to 1 at the arc endpoints, so lambda is only slightly above 1.
ExpansivityReport expansivity_report(const FactorCircleMap& F, int grid_per_piece = 10000);

/// The orientation-preserving conjugacy h with A^fBS o h = h o (theta -> d theta), h(0) = 1,
/// computed by itinerary bisection.
class CircleConjugacy {
public:
    /// Throws std::domain_error ("unsupported") when the expansivity estimate is <= 1.
    explicit CircleConjugacy(const FactorCircleMap& F);

    /// h(num/den) after `depth` inverse branches. Angles whose orbit lands on 0 are exact.
    SpherePoint operator()(std::int64_t num, std::int64_t den, int depth) const;
    /// Same for a double angle, whose dyadic value is expanded exactly.
    SpherePoint operator()(double theta, int depth) const;

    /// The d preimages of 1, starting with 0.
    const std::vector<double>& branch_points() const { return t_; }
    double lambda() const { return lambda_; }

    /// Inverse of the branch j (the arc [t_j, t_{j+1}]) applied to a lifted angle phi in [0,1].
    double inverse_branch(int j, double phi) const;

private:
    SpherePoint evaluate(__int128 num, __int128 den, int depth) const;

    FactorCircleMap F_;
    std::vector<double> t_;
    double lambda_;
};

SpherePoint conjugacy_h(const FactorCircleMap& F, double theta, int depth);

/// Circle distance in turns, in [0, 1/2].
double turns_distance(double a, double b);

} // namespace corrmate
