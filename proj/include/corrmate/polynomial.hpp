#pragma once

#include "corrmate/sphere.hpp"

#include <vector>

namespace corrmate {

/// Coefficients in ascending degree: p[k] multiplies z^k.
using Poly = std::vector<Complex>;

/// Degree of p, or -1 for the zero polynomial. Trailing zeros are ignored.
int degree(const Poly& p);

Complex poly_eval(const Poly& p, Complex z);
Poly poly_derivative(const Poly& p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, Complex s);
Poly poly_pow(const Poly& a, int k);
Poly poly_from_roots(const std::vector<Complex>& roots);

/// Drops leading coefficients with |c| <= rel_tol * max|c|.
Poly poly_trim(Poly p, double rel_tol = 0.0);

/// p(z) / (z - a), discarding the remainder. Uses the backward recurrence when |a| > 1.
Poly deflate(const Poly& p, Complex a);

/// Coefficients of z^deg * p(1/z).
Poly poly_reverse(const Poly& p, int deg);

struct Root {
    Complex value;
    int multiplicity = 1;
    /// True when the cluster that produced this root was wider than the base radius.
    bool ill_conditioned = false;
};

/// All roots with multiplicity. Eigenvalues of the companion matrix, one Newton polish each,
/// then clustering: a group of m nearby eigenvalues is merged when its spread is below
/// max(cluster_radius, 10 (1e-16)^(1/m) max(1,|z|)), which is the perturbation size of an m-fold root.
/// Throws DegenerateError for the zero polynomial and RootFindingError if the eigen solver fails.
std::vector<Root> find_roots(const Poly& p, double cluster_radius = 1e-6);

/// Roots listed with repetition, in no particular order.
std::vector<Complex> find_roots_flat(const Poly& p, double cluster_radius = 1e-6);

/// All roots with repetition by Aberth-Ehrlich iteration, without clustering. Cheap for the small
/// degrees of the classification loop; falls back to find_roots_flat if it does not converge.
std::vector<Complex> aberth_roots(const Poly& p, int max_iter = 100);

/// Smallest relative coefficient perturbation (in max norm) making c a root of multiplicity m,
/// to first order. Near 0 for a true m-fold root.
double multiple_root_backward_error(const Poly& p, Complex c, int m);

} // namespace corrmate
