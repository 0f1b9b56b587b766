#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdent/matcore.hpp"
#include "qdent/rng.hpp"

namespace qdent {

enum class DesignKind { Sic, Optimized, Superimposed };

std::string to_string(DesignKind kind);
DesignKind design_kind_from_string(const std::string& s);

/// Second-moment residual certification tolerance: analytic constructions
/// (SIC, superpositions of SICs) certify at 1e-8, numerically optimized
/// designs at 1e-6.
double design_tolerance(DesignKind kind);

/// Equal-weight set of N unit vectors in dimension d whose second moment
/// matches the Haar average, i.e. (1/N) sum_k (|phi_k><phi_k|)^(x2) equals
/// 2 P_sym / (d(d+1)).
struct ProjectiveDesign {
    int dim = 0;
    int n = 0;
    DesignKind kind = DesignKind::Optimized;
    std::vector<Eigen::VectorXcd> vectors;
};

/// The rescaled measurement operators Pi_k = sqrt(d(d+1)/(2N)) |phi_k><phi_k|.
/// With this scaling, pure-state probability vectors have unit squared norm
/// and sum_k Pi_k^2 = ((d+1)/2) I.
struct NormalizedDesign {
    int dim = 0;
    int n = 0;
    DesignKind kind = DesignKind::Optimized;
    std::vector<ComplexMatrix> elements;
};

struct DesignCertificate {
    double moment_residual = 0.0;       // Frobenius distance to 2 P_sym/(d(d+1))
    double frame_potential = 0.0;       // sum_ij |<phi_i|phi_j>|^4
    double frame_potential_gap = 0.0;   // relative gap to 2 N^2/(d(d+1))
    double max_norm_deviation = 0.0;    // max_k | ||phi_k|| - 1 |
    double tolerance = 0.0;             // residual bound applied
    bool pass = false;
};

struct OptimizeReport {
    double frame_potential = 0.0;
    double bound = 0.0;
    double relative_gap = 0.0;
    long iterations = 0;
    int restarts_used = 0;
    bool converged = false;
};

/// Analytic SIC POVM vectors: d=2 is the Bloch tetrahedron, d=3 the
/// Weyl-Heisenberg orbit of the fiducial (0, 1, -1)/sqrt(2). Pairwise
/// fidelities satisfy |<psi_i|psi_j>|^2 = (d delta_ij + 1)/(d+1) to 1e-12.
ProjectiveDesign build_sic(int dim);

/// Seeded frame-potential minimization over N unit vectors (N >= d^2) with
/// Barzilai-Borwein projected gradient steps and random restarts. The result
/// is deterministic in (dim, n, seed, max_iters). Non-convergence is not an
/// exception: the best design found is returned and the report carries the
/// achieved potential so the caller can decide.
ProjectiveDesign optimize_design(int dim, int n, std::uint64_t seed,
                                 long max_iters = 50000,
                                 OptimizeReport* report = nullptr);

/// Union of a's vectors and rotation applied to b's vectors, equal weights.
/// The union of two designs is again a design. Throws on dimension mismatch
/// or if rotation is not unitary within 1e-10.
ProjectiveDesign superimpose(const ProjectiveDesign& a, const ProjectiveDesign& b,
                             const ComplexMatrix& rotation);

NormalizedDesign normalize_design(const ProjectiveDesign& p);

/// Born probabilities p_k = tr(rho Pi_k) of the normalized design.
/// Throws if an imaginary residue above 1e-10 or sum p_k^2 > 1 + 1e-8
/// shows up, which signals a non-state input.
std::vector<double> design_probabilities(const ComplexMatrix& rho,
                                         const NormalizedDesign& nd);

/// Born probabilities of the plain POVM {(d/N)|phi_k><phi_k|}.
std::vector<double> povm_probabilities(const ComplexMatrix& rho,
                                       const ProjectiveDesign& p);

/// Linear state reconstruction from POVM probabilities:
/// rho = (d+1) sum_k p_k |phi_k><phi_k| - I.
ComplexMatrix reconstruct_state(const std::vector<double>& probs,
                                const ProjectiveDesign& p);

DesignCertificate verify_design(const ProjectiveDesign& p);

double frame_potential(const ProjectiveDesign& p);

/// Projector onto the symmetric subspace of C^d (x) C^d.
ComplexMatrix symmetric_projector(int dim);

// --- design files -----------------------------------------------------------
// JSON object {dim, n, kind, vectors: [[[re,im],...],...]}; doubles are
// written with shortest round-trip precision, so save/load is bit-exact.

std::string design_to_json(const ProjectiveDesign& p);
ProjectiveDesign design_from_json(const std::string& text);
void save_design(const ProjectiveDesign& p, const std::string& path);
ProjectiveDesign load_design(const std::string& path);

}  // namespace qdent
