#pragma once

#include <string>
#include <vector>

#include "qdent/designs.hpp"
#include "qdent/matcore.hpp"
#include "qdent/states.hpp"

namespace qdent {

/// Margin above which a criterion flags entanglement; separates numerical
/// noise from genuine violations.
inline constexpr double kVerdictTol = 1e-9;

/// Operator Schmidt decomposition rho = sum_k lambda_k G_k^A (x) G_k^B.
/// lambdas are the singular values of the realignment (descending,
/// min(d_A^2, d_B^2) of them); ops_a and ops_b are complete orthonormal
/// Hermitian operator bases (d_A^2 and d_B^2 elements), index-matched with
/// lambdas as far as those reach.
struct SchmidtDecomposition {
    Eigen::VectorXd lambdas;
    std::vector<ComplexMatrix> ops_a;
    std::vector<ComplexMatrix> ops_b;
};

/// criterion: name tag. bound: separability bound (1 for the linear trace
/// norm tests, 0 otherwise). margin: value - bound for linear criteria and
/// PPT, -value for the nonlinear ones; entangled <=> margin > kVerdictTol.
struct CriterionReport {
    std::string criterion;
    double value = 0.0;
    double bound = 0.0;
    bool entangled = false;
    double margin = 0.0;
};

/// value = -min eigenvalue of the partial transpose; flags iff positive.
CriterionReport ppt(const DensityMatrix& rho);

/// Schmidt machinery shared by CCNR and LUR. The decomposition is computed
/// in a fixed canonical Hermitian operator basis (diagonal units plus
/// symmetric/antisymmetric pair combinations), where the realigned state is
/// a real matrix: its real SVD delivers Hermitian Schmidt operators and a
/// deterministic completion of the null directions in one stroke.
SchmidtDecomposition operator_schmidt(const DensityMatrix& rho);

/// Trace norm of the realignment against the separability bound 1;
/// equivalently sum_k lambda_k <= 1.
CriterionReport ccnr(const DensityMatrix& rho);

/// Trace norm of the N_A x N_B correlation matrix [C]_ij =
/// tr(rho Pi_i^A (x) Pi_j^B) against the bound 1. With SIC designs on both
/// sides this is the ESIC criterion, otherwise E2D; the report is tagged
/// accordingly.
CriterionReport linear_design_value(const DensityMatrix& rho,
                                    const NormalizedDesign& nd_a,
                                    const NormalizedDesign& nd_b);

/// The correlation matrix itself (real part; throws if any entry has
/// imaginary residue above 1e-8).
Eigen::MatrixXd correlation_matrix(const DensityMatrix& rho,
                                   const NormalizedDesign& nd_a,
                                   const NormalizedDesign& nd_b);

/// Local-uncertainty criterion with the state's own Schmidt LOOs:
/// value = 1 - sum_k <G_k^A (x) G_k^B> - (1/2) sum_k <G_k^A (x) 1 - 1 (x) G_k^B>^2,
/// entangled iff value < -kVerdictTol. Requires d_A == d_B.
CriterionReport lur(const DensityMatrix& rho);

/// Same inequality evaluated with caller-supplied LOO sets (for instance the
/// Schmidt operators of a reference state rather than of rho itself).
CriterionReport lur_with_loos(const DensityMatrix& rho,
                              const std::vector<ComplexMatrix>& ops_a,
                              const std::vector<ComplexMatrix>& ops_b);

/// Nonlinear design criterion (LSIC for a SIC design, L2D otherwise):
/// value = 1 + sum_k <Pi_k (x) Pi_k> - (1/2) sum_k <Pi_k (x) 1 + 1 (x) Pi_k>^2,
/// entangled iff value < -kVerdictTol. Same design on both sides,
/// index-matched; requires d_A == d_B == nd.dim.
CriterionReport nonlinear_design_value(const DensityMatrix& rho,
                                       const NormalizedDesign& nd);

/// sum_k [tr(rho Pi_k^2) - tr(rho Pi_k)^2] for a single-system state;
/// bounded below by (d-1)/2 with equality at pure states.
double variance_sum(const ComplexMatrix& rho_single, const NormalizedDesign& nd);

}  // namespace qdent
