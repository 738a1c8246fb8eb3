#pragma once

#include "afflab/catalogue.hpp"
#include "afflab/connection.hpp"
#include "afflab/quasi_einstein.hpp"

#include <array>
#include <string>
#include <vector>

namespace afflab {

// Exact potential g(x) = w1*x1 + w2*x2 of a strong projective change.
struct ProjectivePotential {
    Num w1, w2;
};

// 2x2 matrix over Num; rows act on column vectors y = A x.
struct Mat2 {
    std::array<std::array<Num, 2>, 2> m{};

    static Mat2 identity();
    static Mat2 diag(const Num& d1, const Num& d2);
    static Mat2 from_columns(const std::array<Num, 2>& c1,
                             const std::array<Num, 2>& c2);
    Num det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    Mat2 inverse() const;  // throws SingularMatrixError
    Mat2 transpose() const;
    Mat2 operator*(const Mat2& o) const;
    std::array<double, 2> apply(const std::array<double, 2>& v) const;
    std::array<Num, 2> apply(const std::array<Num, 2>& v) const;
    bool all_exact() const;
    bool is_identity() const;
};

// The six displayed coefficient shifts: gG_ij^k = G_ij^k + d_i^k w_j + d_j^k w_i.
TypeAModel projective_change(const TypeAModel& model, const ProjectivePotential& w);

// Christoffel coefficients of the same connection in coordinates y = A x.
TypeAModel linear_transform(const TypeAModel& model, const Mat2& A);

struct FlattenResult {
    ProjectivePotential w;  // potential applied to the prescaled model
    TypeAModel flat;        // projective_change(prescaled, w), Ricci = 0
    TypeAModel prescaled;   // model after the x2 rescale making G11^2 = 1
    Mat2 prescale;          // y = prescale*x; identity when G11^2 in {0,1}
    int case_id = 2;        // 1: G11^2 != 0 (cubic root), 2: G11^2 = 0
};

// Strong projective flattening. Case 2 is exact; Case 1 picks the real cubic
// root of smallest magnitude (ties toward the smaller w2).
FlattenResult flatten(const TypeAModel& model);

struct ClassifyResult {
    CanonicalLabel label;
    Mat2 A;                 // linear_transform(model, A) == canonical_model(label)
    ProjectivePotential w;  // potential whose change flattens the input model
    double model_residual = 0.0;
    bool span_verified = false;
};

// Matches the model against the catalogue through the exponent pattern of
// its solution space; params are reported in canonical representatives.
// Throws ClassifyError when no pattern fits within tolerance.
ClassifyResult classify(const TypeAModel& model);

// An affine map between two connections, as a pair of coordinate components.
struct MapSpec {
    std::string name;
    ExpPoly phi1, phi2;
    Connection source, target;
    // Sample box known to avoid Jacobian singularities.
    double lo = -1.0, hi = 1.0;
};

// Catalogue of affine maps between canonical models:
// index 1..10; 7 and 8 take c1, 9 and 10 take c (defaulted when omitted).
MapSpec catalogue_map(int index, const std::vector<Num>& params = {});
// Affine diffeomorphism of N: (e^a x1 + b cos x2 + c sin x2, x2 + d).
MapSpec psi_map(double a, double b, double c, double d);
// The embedding (e^{x1}, x2) of M_5^1(0) into N.
MapSpec phi_n_map();

std::vector<std::array<double, 2>> square_grid(int n, double lo, double hi);

// Supremum over the grid of the intertwining residual
//   d_i d_j Phi^c + tG_ab^c(Phi(x)) d_i Phi^a d_j Phi^b - G_ij^k(x) d_k Phi^c.
// Throws SingularJacobianError when the Jacobian degenerates at a grid point.
double verify_affine_map(const MapSpec& map,
                         const std::vector<std::array<double, 2>>& grid);

}  // namespace afflab
