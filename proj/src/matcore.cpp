#include "qdent/matcore.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdent {

BipartiteDims::BipartiteDims(int a, int b) : dim_a(a), dim_b(b) {
    if (a < 1 || b < 1) {
        throw std::invalid_argument("BipartiteDims: dimensions must be >= 1, got " +
                                    std::to_string(a) + " x " + std::to_string(b));
    }
}

namespace {

void require_square(const ComplexMatrix& m, int dim, const char* who) {
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument(std::string(who) + ": expected a " +
                                    std::to_string(dim) + " x " + std::to_string(dim) +
                                    " matrix, got " + std::to_string(m.rows()) + " x " +
                                    std::to_string(m.cols()));
    }
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteDims& dims,
                            Subsystem keep) {
    require_square(rho, dims.total(), "partial_trace");
    const int da = dims.dim_a;
    const int db = dims.dim_b;
    if (keep == Subsystem::A) {
        ComplexMatrix out = ComplexMatrix::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j)
                for (int k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
            for (int i = 0; i < da; ++i) out(k, l) += rho(i * db + k, i * db + l);
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BipartiteDims& dims) {
    require_square(rho, dims.total(), "partial_transpose");
    const int da = dims.dim_a;
    const int db = dims.dim_b;
    ComplexMatrix out(rho.rows(), rho.cols());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    out(i * db + l, j * db + k) = rho(i * db + k, j * db + l);
    return out;
}

ComplexMatrix realign(const ComplexMatrix& rho, const BipartiteDims& dims) {
    require_square(rho, dims.total(), "realign");
    const int da = dims.dim_a;
    const int db = dims.dim_b;
    ComplexMatrix out(da * da, db * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    out(i * da + j, k * db + l) = rho(i * db + k, j * db + l);
    return out;
}

ComplexMatrix realign_inverse(const ComplexMatrix& r, const BipartiteDims& dims) {
    const int da = dims.dim_a;
    const int db = dims.dim_b;
    if (r.rows() != da * da || r.cols() != db * db) {
        throw std::invalid_argument("realign_inverse: expected a " +
                                    std::to_string(da * da) + " x " +
                                    std::to_string(db * db) + " matrix, got " +
                                    std::to_string(r.rows()) + " x " +
                                    std::to_string(r.cols()));
    }
    ComplexMatrix out(dims.total(), dims.total());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    out(i * db + k, j * db + l) = r(i * da + j, k * db + l);
    return out;
}

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("singular_values: input has non-finite entries");
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("singular_values: decomposition did not converge");
    }
    return svd.singularValues();  // Eigen returns them in descending order
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

double trace_norm(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("trace_norm: input has non-finite entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("trace_norm: decomposition did not converge");
    }
    return svd.singularValues().sum();
}

double hermiticity_deviation(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermiticity_deviation: matrix is not square");
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& h) {
    const double dev = hermiticity_deviation(h);
    if (!(dev <= kHermitianTol)) {
        throw std::invalid_argument("min_eigenvalue: input deviates from Hermiticity by " +
                                    std::to_string(dev));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("min_eigenvalue: eigensolver did not converge");
    }
    return es.eigenvalues().minCoeff();
}

}  // namespace qdent
