#include "qdent/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace qdent {

std::string to_string(BellKind kind) {
    switch (kind) {
        case BellKind::PsiMinus: return "psi-";
        case BellKind::PsiPlus: return "psi+";
        case BellKind::PhiMinus: return "phi-";
        case BellKind::PhiPlus: return "phi+";
    }
    throw std::logic_error("to_string(BellKind): unreachable");
}

DensityMatrix bell_state(BellKind kind) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    const double s = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case BellKind::PsiMinus: v(1) = s; v(2) = -s; break;
        case BellKind::PsiPlus:  v(1) = s; v(2) = s;  break;
        case BellKind::PhiMinus: v(0) = s; v(3) = -s; break;
        case BellKind::PhiPlus:  v(0) = s; v(3) = s;  break;
    }
    return {v * v.adjoint(), BipartiteDims(2, 2)};
}

DensityMatrix noisy_two_qubit(BellKind kind, double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("noisy_two_qubit: p must lie in [0,1], got " +
                                    std::to_string(p));
    }
    ComplexMatrix noise = ComplexMatrix::Zero(4, 4);
    noise(0, 0) = 2.0 / 3.0;  // |00><00|
    noise(1, 1) = 1.0 / 3.0;  // |01><01|
    const DensityMatrix pure = bell_state(kind);
    return {p * pure.mat + (1.0 - p) * noise, pure.dims};
}

DensityMatrix mix_with_white_noise(const DensityMatrix& rho, double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("mix_with_white_noise: p must lie in [0,1], got " +
                                    std::to_string(p));
    }
    const int d = rho.dims.total();
    return {p * rho.mat + (1.0 - p) / d * ComplexMatrix::Identity(d, d), rho.dims};
}

DensityMatrix bennett_upb_state() {
    // Five-tile unextendible product basis on C^3 (x) C^3.
    auto ket = [](std::initializer_list<double> amps) {
        Eigen::VectorXcd v(3);
        int i = 0;
        for (double a : amps) v(i++) = a;
        return v;
    };
    const double s = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    const Eigen::VectorXcd e0 = ket({1, 0, 0});
    const Eigen::VectorXcd e2 = ket({0, 0, 1});
    const Eigen::VectorXcd m01 = ket({s, -s, 0});   // (|0>-|1>)/sqrt(2)
    const Eigen::VectorXcd m12 = ket({0, s, -s});   // (|1>-|2>)/sqrt(2)
    const Eigen::VectorXcd flat = ket({t, t, t});   // (|0>+|1>+|2>)/sqrt(3)

    std::vector<Eigen::VectorXcd> basis;
    auto prod = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
        Eigen::VectorXcd v(9);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) v(i * 3 + k) = a(i) * b(k);
        return v;
    };
    basis.push_back(prod(e0, m01));
    basis.push_back(prod(m01, e2));
    basis.push_back(prod(e2, m12));
    basis.push_back(prod(m12, e0));
    basis.push_back(prod(flat, flat));

    ComplexMatrix rho = ComplexMatrix::Identity(9, 9);
    for (const auto& v : basis) rho -= v * v.adjoint();
    rho /= 4.0;
    DensityMatrix out{rho, BipartiteDims(3, 3)};
    check_density_matrix(out);
    return out;
}

DensityMatrix chessboard_state(const std::array<double, 6>& v) {
    const double v1 = v[0], v2 = v[1], v3 = v[2], v4 = v[3], v5 = v[4], v6 = v[5];
    if (std::abs(v5) < 1e-6 || std::abs(v6) < 1e-6) {
        throw std::invalid_argument(
            "chessboard_state: |v5| and |v6| must be >= 1e-6 (the construction divides "
            "by both)");
    }
    Eigen::VectorXcd V1 = Eigen::VectorXcd::Zero(9);
    V1(0) = v5; V1(2) = v1 * v3 / v6; V1(4) = v6;
    Eigen::VectorXcd V2 = Eigen::VectorXcd::Zero(9);
    V2(1) = v1; V2(3) = v2; V2(5) = v3;
    Eigen::VectorXcd V3 = Eigen::VectorXcd::Zero(9);
    V3(0) = v6; V3(4) = -v5; V3(6) = v1 * v4 / v5;
    Eigen::VectorXcd V4 = Eigen::VectorXcd::Zero(9);
    V4(1) = v2; V4(3) = -v1; V4(7) = v4;

    ComplexMatrix rho = ComplexMatrix::Zero(9, 9);
    double norm = 0.0;
    for (const auto& w : {V1, V2, V3, V4}) {
        rho += w * w.adjoint();
        norm += w.squaredNorm();
    }
    rho /= norm;
    DensityMatrix out{rho, BipartiteDims(3, 3)};
    check_density_matrix(out);
    // The family is bound entangled: every member has positive partial
    // transpose, so a negative eigenvalue there means the parameters are bad.
    const double pt_min = min_eigenvalue(partial_transpose(out.mat, out.dims));
    if (pt_min < -1e-9) {
        throw std::invalid_argument("chessboard_state: partial transpose has eigenvalue " +
                                    std::to_string(pt_min) + "; construction violated");
    }
    return out;
}

DensityMatrix horodecki_state(double x) {
    if (x <= 0.0 || x >= 1.0) {
        throw std::invalid_argument("horodecki_state: x must lie in (0,1), got " +
                                    std::to_string(x));
    }
    ComplexMatrix m = ComplexMatrix::Zero(9, 9);
    for (int i = 0; i < 9; ++i) m(i, i) = x;
    m(0, 4) = m(4, 0) = x;
    m(0, 8) = m(8, 0) = x;
    m(4, 8) = m(8, 4) = x;
    m(6, 6) = m(8, 8) = (1.0 + x) / 2.0;
    m(6, 8) = m(8, 6) = std::sqrt(1.0 - x * x) / 2.0;
    m /= 8.0 * x + 1.0;
    DensityMatrix out{m, BipartiteDims(3, 3)};
    check_density_matrix(out);
    return out;
}

DensityMatrix random_density_matrix(const BipartiteDims& dims, RngStream& stream) {
    const ComplexMatrix g = random_ginibre(dims.total(), stream);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return {std::move(rho), dims};
}

DensityMatrix random_npt_sample(const BipartiteDims& dims, RngStream& stream,
                                long* attempts) {
    for (;;) {
        if (attempts) ++*attempts;
        DensityMatrix rho = random_density_matrix(dims, stream);
        if (min_eigenvalue(partial_transpose(rho.mat, rho.dims)) < -1e-12) return rho;
    }
}

std::array<double, 6> chessboard_parameters(RngStream& stream) {
    for (;;) {
        std::array<double, 6> v;
        for (double& x : v) x = stream.normal(0.0, 2.0);
        if (std::abs(v[4]) >= 1e-6 && std::abs(v[5]) >= 1e-6) return v;
    }
}

double purity(const DensityMatrix& rho) {
    return (rho.mat * rho.mat).trace().real();
}

void check_density_matrix(const DensityMatrix& rho, double tol) {
    const int d = rho.dims.total();
    if (rho.mat.rows() != d || rho.mat.cols() != d) {
        throw std::runtime_error("density matrix shape " + std::to_string(rho.mat.rows()) +
                                 " x " + std::to_string(rho.mat.cols()) +
                                 " does not match dims " + std::to_string(rho.dims.dim_a) +
                                 " x " + std::to_string(rho.dims.dim_b));
    }
    const double herm = hermiticity_deviation(rho.mat);
    if (herm > tol) {
        throw std::runtime_error("density matrix is not Hermitian (deviation " +
                                 std::to_string(herm) + ")");
    }
    const double trace_err = std::abs(rho.mat.trace() - Complex(1.0, 0.0));
    if (trace_err > tol) {
        throw std::runtime_error("density matrix trace deviates from 1 by " +
                                 std::to_string(trace_err));
    }
    const double min_eig = min_eigenvalue(rho.mat);
    if (min_eig < -tol) {
        throw std::runtime_error("density matrix has negative eigenvalue " +
                                 std::to_string(min_eig));
    }
}

bool is_valid_density_matrix(const DensityMatrix& rho, double tol) {
    try {
        check_density_matrix(rho, tol);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace qdent
