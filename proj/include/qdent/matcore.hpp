#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Max-entry deviation |h - h^dag| accepted before an input is rejected as
// non-Hermitian.
inline constexpr double kHermitianTol = 1e-10;

enum class Subsystem { A, B };

/// Dimension labels for a bipartite Hilbert space C^{d_A} (x) C^{d_B}.
/// Composite basis ordering is |i⟩_A ⊗ |k⟩_B -> row i*d_B + k.
struct BipartiteDims {
    int dim_a;
    int dim_b;

    BipartiteDims(int a, int b);
    int total() const { return dim_a * dim_b; }
    bool operator==(const BipartiteDims&) const = default;
};

/// Kronecker product, dims (a.rows*b.rows) x (a.cols*b.cols).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced state of the kept subsystem; preserves the trace.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteDims& dims,
                            Subsystem keep);

/// Transpose on subsystem B. Involution; preserves Hermiticity and trace.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BipartiteDims& dims);

/// Realignment map: returns the d_A^2 x d_B^2 matrix R with
/// R[(i,j),(k,l)] = rho[(i,k),(j,l)]. A product state A (x) B realigns to the
/// rank-1 matrix vec(A) vec(B)^T.
ComplexMatrix realign(const ComplexMatrix& rho, const BipartiteDims& dims);

/// Inverse index reshuffle: realign_inverse(realign(rho)) == rho exactly.
ComplexMatrix realign_inverse(const ComplexMatrix& r, const BipartiteDims& dims);

/// Singular values in descending order; throws on non-finite input or if the
/// decomposition does not converge.
Eigen::VectorXd singular_values(const ComplexMatrix& m);

/// Sum of singular values (nuclear norm).
double trace_norm(const ComplexMatrix& m);
double trace_norm(const Eigen::MatrixXd& m);

/// Smallest eigenvalue of a Hermitian matrix. Throws if the input deviates
/// from Hermiticity by more than kHermitianTol in any entry.
double min_eigenvalue(const ComplexMatrix& h);

/// max_ij |m - m^dag|_ij
double hermiticity_deviation(const ComplexMatrix& m);

}  // namespace qdent
