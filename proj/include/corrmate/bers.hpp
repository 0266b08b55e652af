#pragma once

#include "corrmate/config.hpp"
#include "corrmate/rational.hpp"

#include <string>
#include <vector>

namespace corrmate {

enum class Family { A, B, C };

/// Punctured-sphere case p = 2q, n = 1. `free` holds a_1..a_{q-2}.
struct FamilyAParams {
    int q = 2;
    std::vector<Complex> free;
};

/// Order-two point case p = 2q + 1, n = 1. `free` holds a_1..a_{q-1}.
struct FamilyBParams {
    int q = 2;
    std::vector<Complex> free;
};

/// n >= 3: R(z) = prod (z - a_j)^n / z^{np-1}, parametrized by the roots of its critical
/// polynomial. critical_data = {1} u {-1 if p even} u {c, 1/c pairs}.
struct FamilyCParams {
    int n = 3;
    int p = 1;
    std::vector<Complex> critical_data;
};

/// Coefficients a_1..a_{2q-1} of z + sum a_j z^{-j}, dependent ones filled in.
std::vector<Complex> family_a_coefficients(const FamilyAParams& params);
/// Coefficients a_1..a_{2q}.
std::vector<Complex> family_b_coefficients(const FamilyBParams& params);

RationalMap build_family_a(const FamilyAParams& params);
RationalMap build_family_b(const FamilyBParams& params);

/// The polynomial prod (z - a_j) whose n-th power is the numerator.
Poly family_c_base(const FamilyCParams& params);
RationalMap build_family_c(const FamilyCParams& params, const Config& cfg = {});

/// The p-th roots of unity: the base point of each family.
std::vector<Complex> default_critical_data(int p);

/// Number of free complex parameters of the family for (n,p).
int family_free_parameters(Family family, int n, int p);

/// For R = B(z)^n / z^{np-1} (B monic of degree p): Q = n z B' - (np-1) B, monic of degree p,
/// whose roots are the critical points of R away from 0, infinity and the zeros of B.
/// Throws DomainError if R does not have that shape.
Poly critical_polynomial(const RationalMap& R, int n, int p);

struct AuditClause {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditClause> clauses;
    /// The p critical points forming the eta-invariant set.
    std::vector<Complex> boundary_critical;
    /// The p critical points of multiplicity n-1 (empty for n = 1) and their common value.
    std::vector<Complex> tiling_critical;
    SpherePoint tiling_value;

    bool passed() const;
    /// Name and detail of the first failing clause, or empty.
    std::string first_failure() const;
};

/// Checks the critical structure of a degree-np map of the families:
/// (i) p critical points forming an eta-invariant set, with two eta-fixed points for even p and one for odd p;
/// (ii) multiplicity np-2 at the order-(np-1) pole at 0;
/// (iii) for n >= 2, p critical points of multiplicity n-1 with one common critical value;
/// (iv) R(infinity) = infinity and R'(infinity) = 1.
AuditReport validate_family(const RationalMap& R, int n, int p, const Config& cfg = {});

/// Pairs each c with some 1/c' within tol, as multisets. Used by the family-C validation and audit.
bool inversion_symmetric(const std::vector<Complex>& pts, double tol);

} // namespace corrmate
