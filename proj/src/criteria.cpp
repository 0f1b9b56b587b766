#include "qdent/criteria.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace qdent {

namespace {

CriterionReport make_linear_report(std::string name, double value) {
    CriterionReport r;
    r.criterion = std::move(name);
    r.value = value;
    r.bound = 1.0;
    r.margin = value - 1.0;
    r.entangled = r.margin > kVerdictTol;
    return r;
}

CriterionReport make_nonlinear_report(std::string name, double value) {
    CriterionReport r;
    r.criterion = std::move(name);
    r.value = value;
    r.bound = 0.0;
    r.margin = -value;
    r.entangled = r.margin > kVerdictTol;
    return r;
}

/// Canonical orthonormal Hermitian basis of d x d matrices: the d diagonal
/// units, then for each pair i < j the symmetric and antisymmetric
/// combinations (E_ij + E_ji)/sqrt(2) and i(E_ij - E_ji)/sqrt(2).
std::vector<ComplexMatrix> hermitian_basis(int d) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(d * d);
    for (int i = 0; i < d; ++i) {
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        m(i, i) = 1.0;
        basis.push_back(std::move(m));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            ComplexMatrix sym = ComplexMatrix::Zero(d, d);
            sym(i, j) = s;
            sym(j, i) = s;
            basis.push_back(std::move(sym));
            ComplexMatrix asym = ComplexMatrix::Zero(d, d);
            asym(i, j) = Complex(0, s);
            asym(j, i) = Complex(0, -s);
            basis.push_back(std::move(asym));
        }
    }
    return basis;
}

/// Row m holds the operator's entries arranged so that
/// (W R W'^T)[m,n] = tr(rho op_m (x) op'_n) for R = realign(rho):
/// W[m, i*d + j] = op_m[j, i].
ComplexMatrix expectation_rows(const std::vector<ComplexMatrix>& ops, int d) {
    ComplexMatrix w(static_cast<Eigen::Index>(ops.size()), d * d);
    for (std::size_t m = 0; m < ops.size(); ++m) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) w(static_cast<Eigen::Index>(m), i * d + j) = ops[m](j, i);
    }
    return w;
}

Eigen::MatrixXd real_part_checked(const ComplexMatrix& m, double tol, const char* who) {
    const double residue = m.imag().cwiseAbs().maxCoeff();
    if (residue > tol) {
        throw std::invalid_argument(std::string(who) +
                                    ": expectation matrix has imaginary residue " +
                                    std::to_string(residue));
    }
    return m.real();
}

double real_trace(const ComplexMatrix& product) { return product.trace().real(); }

}  // namespace

CriterionReport ppt(const DensityMatrix& rho) {
    CriterionReport r;
    r.criterion = "PPT";
    r.value = -min_eigenvalue(partial_transpose(rho.mat, rho.dims));
    r.bound = 0.0;
    r.margin = r.value;
    r.entangled = r.margin > kVerdictTol;
    return r;
}

SchmidtDecomposition operator_schmidt(const DensityMatrix& rho) {
    const int da = rho.dims.dim_a;
    const int db = rho.dims.dim_b;
    const std::vector<ComplexMatrix> basis_a = hermitian_basis(da);
    const std::vector<ComplexMatrix> basis_b = hermitian_basis(db);
    // Expansion coefficients of rho over the Hermitian product basis; real
    // for Hermitian rho, so a real SVD applies and its orthogonal factors
    // recombine the bases into Hermitian Schmidt operators (with the null
    // space filled in for free).
    const ComplexMatrix r = realign(rho.mat, rho.dims);
    const ComplexMatrix c = expectation_rows(basis_a, da) * r *
                            expectation_rows(basis_b, db).transpose();
    const Eigen::MatrixXd c_real = real_part_checked(c, 1e-8, "operator_schmidt");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c_real,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("operator_schmidt: SVD did not converge");
    }

    SchmidtDecomposition out;
    out.lambdas = svd.singularValues();
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    out.ops_a.reserve(da * da);
    for (int k = 0; k < da * da; ++k) {
        ComplexMatrix op = ComplexMatrix::Zero(da, da);
        for (int m = 0; m < da * da; ++m) op += u(m, k) * basis_a[m];
        out.ops_a.push_back(std::move(op));
    }
    out.ops_b.reserve(db * db);
    for (int k = 0; k < db * db; ++k) {
        ComplexMatrix op = ComplexMatrix::Zero(db, db);
        for (int n = 0; n < db * db; ++n) op += v(n, k) * basis_b[n];
        out.ops_b.push_back(std::move(op));
    }
    return out;
}

CriterionReport ccnr(const DensityMatrix& rho) {
    return make_linear_report("CCNR", trace_norm(realign(rho.mat, rho.dims)));
}

Eigen::MatrixXd correlation_matrix(const DensityMatrix& rho,
                                   const NormalizedDesign& nd_a,
                                   const NormalizedDesign& nd_b) {
    if (nd_a.dim != rho.dims.dim_a || nd_b.dim != rho.dims.dim_b) {
        throw std::invalid_argument("correlation_matrix: design dimensions " +
                                    std::to_string(nd_a.dim) + ", " + std::to_string(nd_b.dim) +
                                    " do not match state dimensions " +
                                    std::to_string(rho.dims.dim_a) + " x " +
                                    std::to_string(rho.dims.dim_b));
    }
    const ComplexMatrix r = realign(rho.mat, rho.dims);
    const ComplexMatrix c = expectation_rows(nd_a.elements, nd_a.dim) * r *
                            expectation_rows(nd_b.elements, nd_b.dim).transpose();
    return real_part_checked(c, 1e-8, "correlation_matrix");
}

CriterionReport linear_design_value(const DensityMatrix& rho,
                                    const NormalizedDesign& nd_a,
                                    const NormalizedDesign& nd_b) {
    const bool sic = nd_a.kind == DesignKind::Sic && nd_b.kind == DesignKind::Sic;
    return make_linear_report(sic ? "ESIC" : "E2D",
                              trace_norm(correlation_matrix(rho, nd_a, nd_b)));
}

CriterionReport lur_with_loos(const DensityMatrix& rho,
                              const std::vector<ComplexMatrix>& ops_a,
                              const std::vector<ComplexMatrix>& ops_b) {
    if (ops_a.size() != ops_b.size()) {
        throw std::invalid_argument("lur_with_loos: observable lists differ in length");
    }
    const ComplexMatrix rho_a = partial_trace(rho.mat, rho.dims, Subsystem::A);
    const ComplexMatrix rho_b = partial_trace(rho.mat, rho.dims, Subsystem::B);
    double value = 1.0;
    for (std::size_t k = 0; k < ops_a.size(); ++k) {
        const double joint = real_trace(rho.mat * kron(ops_a[k], ops_b[k]));
        const double a = real_trace(rho_a * ops_a[k]);
        const double b = real_trace(rho_b * ops_b[k]);
        value -= joint + 0.5 * (a - b) * (a - b);
    }
    return make_nonlinear_report("LUR", value);
}

CriterionReport lur(const DensityMatrix& rho) {
    if (rho.dims.dim_a != rho.dims.dim_b) {
        throw std::invalid_argument("lur: subsystem dimensions must match, got " +
                                    std::to_string(rho.dims.dim_a) + " x " +
                                    std::to_string(rho.dims.dim_b));
    }
    const SchmidtDecomposition sd = operator_schmidt(rho);
    const ComplexMatrix rho_a = partial_trace(rho.mat, rho.dims, Subsystem::A);
    const ComplexMatrix rho_b = partial_trace(rho.mat, rho.dims, Subsystem::B);
    // With the state's own Schmidt operators, <G_k^A (x) G_k^B> = lambda_k.
    double value = 1.0 - sd.lambdas.sum();
    for (std::size_t k = 0; k < sd.ops_a.size(); ++k) {
        const double a = real_trace(rho_a * sd.ops_a[k]);
        const double b = real_trace(rho_b * sd.ops_b[k]);
        value -= 0.5 * (a - b) * (a - b);
    }
    return make_nonlinear_report("LUR", value);
}

CriterionReport nonlinear_design_value(const DensityMatrix& rho,
                                       const NormalizedDesign& nd) {
    if (rho.dims.dim_a != rho.dims.dim_b) {
        throw std::invalid_argument(
            "nonlinear_design_value: subsystem dimensions must match, got " +
            std::to_string(rho.dims.dim_a) + " x " + std::to_string(rho.dims.dim_b));
    }
    if (nd.dim != rho.dims.dim_a) {
        throw std::invalid_argument("nonlinear_design_value: design dimension " +
                                    std::to_string(nd.dim) + " does not match state");
    }
    const ComplexMatrix rho_a = partial_trace(rho.mat, rho.dims, Subsystem::A);
    const ComplexMatrix rho_b = partial_trace(rho.mat, rho.dims, Subsystem::B);
    double value = 1.0;
    for (const auto& pi : nd.elements) {
        const double joint = real_trace(rho.mat * kron(pi, pi));
        const double a = real_trace(rho_a * pi);
        const double b = real_trace(rho_b * pi);
        value += joint - 0.5 * (a + b) * (a + b);
    }
    return make_nonlinear_report(nd.kind == DesignKind::Sic ? "LSIC" : "L2D", value);
}

double variance_sum(const ComplexMatrix& rho_single, const NormalizedDesign& nd) {
    if (rho_single.rows() != nd.dim || rho_single.cols() != nd.dim) {
        throw std::invalid_argument("variance_sum: state dimension does not match design");
    }
    double total = 0.0;
    for (const auto& pi : nd.elements) {
        const double second = real_trace(rho_single * pi * pi);
        const double first = real_trace(rho_single * pi);
        total += second - first * first;
    }
    return total;
}

}  // namespace qdent
