#pragma once

#include <array>
#include <string>

#include "qdent/matcore.hpp"
#include "qdent/rng.hpp"

namespace qdent {

inline constexpr double kStateTol = 1e-10;

/// Bipartite density matrix: Hermitian, unit trace, positive semidefinite
/// (all within kStateTol).
struct DensityMatrix {
    ComplexMatrix mat;
    BipartiteDims dims;
};

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

std::string to_string(BellKind kind);

/// Projector onto the named Bell state,
/// |psi±> = (|01> ± |10>)/sqrt(2), |phi±> = (|00> ± |11>)/sqrt(2).
DensityMatrix bell_state(BellKind kind);

/// p |psi><psi| + (1-p) rho_s with the separable noise
/// rho_s = (2/3)|00><00| + (1/3)|01><01|. Entangled (NPT) for every p > 0.
DensityMatrix noisy_two_qubit(BellKind kind, double p);

/// 3x3 bound entangled state from the five-vector unextendible product
/// basis: rho = (1/4)(I - sum_i |psi_i><psi_i|). Rank 4 and PPT.
DensityMatrix bennett_upb_state();

/// p rho + (1-p) I/d.
DensityMatrix mix_with_white_noise(const DensityMatrix& rho, double p);

/// 3x3 chessboard state N sum_j |V_j><V_j| built from six real parameters.
/// Requires |v5|, |v6| >= 1e-6 (V1 divides by v6, V3 by v5); throws
/// std::invalid_argument on degenerate parameters so the caller can
/// resample. The family is PPT; each constructed state is checked.
DensityMatrix chessboard_state(const std::array<double, 6>& v);

/// 3x3 bound entangled Horodecki state with parameter 0 < x < 1.
DensityMatrix horodecki_state(double x);

/// Hilbert-Schmidt random state: G G^dag / tr(G G^dag) with G a square
/// Ginibre matrix. Deterministic per stream.
DensityMatrix random_density_matrix(const BipartiteDims& dims, RngStream& stream);

/// Rejection-samples random_density_matrix until the partial transpose has a
/// negative eigenvalue (< -1e-12). If attempts is non-null it is incremented
/// once per draw, accepted or not.
DensityMatrix random_npt_sample(const BipartiteDims& dims, RngStream& stream,
                                long* attempts = nullptr);

/// Six independent N(0, sigma=2) draws, resampled as a block until
/// |v5|, |v6| clear the chessboard_state degeneracy guard.
std::array<double, 6> chessboard_parameters(RngStream& stream);

double purity(const DensityMatrix& rho);

/// Throws std::runtime_error naming the violated invariant.
void check_density_matrix(const DensityMatrix& rho, double tol = kStateTol);
bool is_valid_density_matrix(const DensityMatrix& rho, double tol = kStateTol);

}  // namespace qdent
