#include "qdent/designs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qdent {

std::string to_string(DesignKind kind) {
    switch (kind) {
        case DesignKind::Sic: return "sic";
        case DesignKind::Optimized: return "optimized";
        case DesignKind::Superimposed: return "superimposed";
    }
    throw std::logic_error("to_string(DesignKind): unreachable");
}

DesignKind design_kind_from_string(const std::string& s) {
    if (s == "sic") return DesignKind::Sic;
    if (s == "optimized") return DesignKind::Optimized;
    if (s == "superimposed") return DesignKind::Superimposed;
    throw std::invalid_argument("unknown design kind: " + s);
}

double design_tolerance(DesignKind kind) {
    return kind == DesignKind::Optimized ? 1e-6 : 1e-8;
}

namespace {

Eigen::VectorXcd bloch_vector_state(double nx, double ny, double nz) {
    const double theta = std::acos(nz);
    const double phi = std::atan2(ny, nx);
    Eigen::VectorXcd v(2);
    v(0) = std::cos(theta / 2);
    v(1) = std::exp(Complex(0, phi)) * std::sin(theta / 2);
    return v;
}

}  // namespace

ProjectiveDesign build_sic(int dim) {
    ProjectiveDesign p;
    p.dim = dim;
    p.n = dim * dim;
    p.kind = DesignKind::Sic;
    if (dim == 2) {
        const double s = 1.0 / std::sqrt(3.0);
        p.vectors.push_back(bloch_vector_state(s, s, s));
        p.vectors.push_back(bloch_vector_state(s, -s, -s));
        p.vectors.push_back(bloch_vector_state(-s, s, -s));
        p.vectors.push_back(bloch_vector_state(-s, -s, s));
        return p;
    }
    if (dim == 3) {
        // Cyclic-shift/phase orbit of the fiducial (0, 1, -1)/sqrt(2).
        Eigen::VectorXcd f(3);
        f << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
        const Complex omega(-0.5, std::sqrt(3.0) / 2.0);  // exp(2*pi*i/3)
        const Complex w[3] = {Complex(1.0, 0.0), omega, std::conj(omega)};
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                Eigen::VectorXcd v(3);
                for (int m = 0; m < 3; ++m) {
                    // (X^j Z^k f)[m] = omega^{k (m - j)} f[m - j]
                    const int src = ((m - j) % 3 + 3) % 3;
                    v(m) = w[(k * src) % 3] * f(src);
                }
                p.vectors.push_back(v);
            }
        }
        return p;
    }
    throw std::invalid_argument("build_sic: supported dimensions are 2 and 3, got " +
                                std::to_string(dim));
}

ComplexMatrix symmetric_projector(int dim) {
    ComplexMatrix swap = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) swap(i * dim + j, j * dim + i) = 1.0;
    return (ComplexMatrix::Identity(dim * dim, dim * dim) + swap) / 2.0;
}

double frame_potential(const ProjectiveDesign& p) {
    double f = 0.0;
    for (const auto& vi : p.vectors)
        for (const auto& vj : p.vectors) {
            const double a = std::norm(vi.dot(vj));  // |<vi|vj>|^2
            f += a * a;
        }
    return f;
}

namespace {

ComplexMatrix second_moment(const ProjectiveDesign& p) {
    const int d = p.dim;
    ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& v : p.vectors) {
        const ComplexMatrix proj = v * v.adjoint();
        m += kron(proj, proj);
    }
    return m / static_cast<double>(p.n);
}

double moment_residual(const ProjectiveDesign& p) {
    const int d = p.dim;
    const ComplexMatrix target = 2.0 * symmetric_projector(d) / (d * (d + 1.0));
    return (second_moment(p) - target).norm();
}

}  // namespace

DesignCertificate verify_design(const ProjectiveDesign& p) {
    if (p.dim < 1 || p.n != static_cast<int>(p.vectors.size())) {
        throw std::invalid_argument("verify_design: inconsistent design header");
    }
    DesignCertificate cert;
    cert.moment_residual = moment_residual(p);
    cert.frame_potential = frame_potential(p);
    const double bound = 2.0 * p.n * p.n / (p.dim * (p.dim + 1.0));
    cert.frame_potential_gap = (cert.frame_potential - bound) / bound;
    cert.max_norm_deviation = 0.0;
    for (const auto& v : p.vectors) {
        cert.max_norm_deviation =
            std::max(cert.max_norm_deviation, std::abs(v.norm() - 1.0));
    }
    cert.tolerance = design_tolerance(p.kind);
    cert.pass = cert.moment_residual <= cert.tolerance && cert.max_norm_deviation <= 1e-10;
    return cert;
}

ProjectiveDesign superimpose(const ProjectiveDesign& a, const ProjectiveDesign& b,
                             const ComplexMatrix& rotation) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("superimpose: dimension mismatch " +
                                    std::to_string(a.dim) + " vs " + std::to_string(b.dim));
    }
    if (rotation.rows() != a.dim || rotation.cols() != a.dim) {
        throw std::invalid_argument("superimpose: rotation has wrong shape");
    }
    const double unitary_dev =
        (rotation.adjoint() * rotation - ComplexMatrix::Identity(a.dim, a.dim))
            .cwiseAbs()
            .maxCoeff();
    if (unitary_dev > 1e-10) {
        throw std::invalid_argument("superimpose: rotation is not unitary (deviation " +
                                    std::to_string(unitary_dev) + ")");
    }
    ProjectiveDesign out;
    out.dim = a.dim;
    out.n = a.n + b.n;
    out.kind = DesignKind::Superimposed;
    out.vectors = a.vectors;
    for (const auto& v : b.vectors) out.vectors.push_back(rotation * v);
    return out;
}

NormalizedDesign normalize_design(const ProjectiveDesign& p) {
    NormalizedDesign nd;
    nd.dim = p.dim;
    nd.n = p.n;
    nd.kind = p.kind;
    const double c = std::sqrt(p.dim * (p.dim + 1.0) / (2.0 * p.n));
    nd.elements.reserve(p.vectors.size());
    for (const auto& v : p.vectors) nd.elements.push_back(c * (v * v.adjoint()));
    return nd;
}

std::vector<double> design_probabilities(const ComplexMatrix& rho,
                                         const NormalizedDesign& nd) {
    if (rho.rows() != nd.dim || rho.cols() != nd.dim) {
        throw std::invalid_argument("design_probabilities: state dimension " +
                                    std::to_string(rho.rows()) + " does not match design dimension " +
                                    std::to_string(nd.dim));
    }
    std::vector<double> probs;
    probs.reserve(nd.elements.size());
    double sum_sq = 0.0;
    for (const auto& pi : nd.elements) {
        const Complex t = (rho * pi).trace();
        if (std::abs(t.imag()) > 1e-10) {
            throw std::invalid_argument(
                "design_probabilities: non-real expectation value (imaginary part " +
                std::to_string(t.imag()) + "); input is not a valid state");
        }
        probs.push_back(t.real());
        sum_sq += t.real() * t.real();
    }
    if (sum_sq > 1.0 + 1e-8) {
        throw std::invalid_argument(
            "design_probabilities: squared probability norm exceeds 1 (" +
            std::to_string(sum_sq) + "); input is not a valid state");
    }
    return probs;
}

std::vector<double> povm_probabilities(const ComplexMatrix& rho,
                                       const ProjectiveDesign& p) {
    if (rho.rows() != p.dim || rho.cols() != p.dim) {
        throw std::invalid_argument("povm_probabilities: state dimension does not match design");
    }
    const double w = static_cast<double>(p.dim) / p.n;
    std::vector<double> probs;
    probs.reserve(p.vectors.size());
    for (const auto& v : p.vectors) {
        const Complex t = v.dot(rho * v);  // <v|rho|v>
        if (std::abs(t.imag()) > 1e-10) {
            throw std::invalid_argument("povm_probabilities: non-real expectation value");
        }
        probs.push_back(w * t.real());
    }
    return probs;
}

ComplexMatrix reconstruct_state(const std::vector<double>& probs,
                                const ProjectiveDesign& p) {
    if (probs.size() != p.vectors.size()) {
        throw std::invalid_argument("reconstruct_state: got " + std::to_string(probs.size()) +
                                    " probabilities for " + std::to_string(p.vectors.size()) +
                                    " design elements");
    }
    ComplexMatrix rho = -ComplexMatrix::Identity(p.dim, p.dim);
    for (std::size_t k = 0; k < probs.size(); ++k) {
        rho += (p.dim + 1.0) * probs[k] * (p.vectors[k] * p.vectors[k].adjoint());
    }
    return rho;
}

// --- frame-potential optimizer ----------------------------------------------

namespace {

using VectorMatrix = Eigen::MatrixXcd;  // columns are the design vectors

void normalize_columns(VectorMatrix& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j).normalize();
}

// Riemannian gradient of the frame potential on the product of unit spheres:
// ambient gradient 4 V (|G|^2 . G) with the radial component of each column
// removed.
VectorMatrix sphere_gradient(const VectorMatrix& v) {
    const VectorMatrix gram = v.adjoint() * v;
    const VectorMatrix weighted = gram.cwiseAbs2().cwiseProduct(gram);
    VectorMatrix g = 4.0 * v * weighted;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double radial = v.col(j).dot(g.col(j)).real();
        g.col(j) -= radial * v.col(j);
    }
    return g;
}

double frame_potential_of(const VectorMatrix& v) {
    const Eigen::MatrixXd a = (v.adjoint() * v).cwiseAbs2();
    return a.cwiseProduct(a).sum();
}

// Second-moment residual ||(1/N) sum (vv*)x(vv*) - 2 P_sym/(d(d+1))||_F.
// Equals sqrt((F - bound))/N analytically, but measured directly: the
// frame-potential difference cancels to noise near the optimum while the
// moment entries stay accurate, so this is the only trustworthy progress
// signal below residuals of ~1e-8.
double residual_of(const VectorMatrix& v, const ComplexMatrix& target) {
    const int d = static_cast<int>(v.rows());
    const int n = static_cast<int>(v.cols());
    ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
    for (int j = 0; j < n; ++j) {
        const ComplexMatrix proj = v.col(j) * v.col(j).adjoint();
        m += kron(proj, proj);
    }
    return (m / static_cast<double>(n) - target).norm();
}

ProjectiveDesign wrap_design(int dim, int n, const VectorMatrix& v) {
    ProjectiveDesign p;
    p.dim = dim;
    p.n = n;
    p.kind = DesignKind::Optimized;
    p.vectors.reserve(n);
    for (int j = 0; j < n; ++j) p.vectors.push_back(v.col(j));
    return p;
}

}  // namespace

ProjectiveDesign optimize_design(int dim, int n, std::uint64_t seed, long max_iters,
                                 OptimizeReport* report) {
    if (dim < 2) throw std::invalid_argument("optimize_design: dim must be >= 2");
    if (n < dim * dim) {
        throw std::invalid_argument("optimize_design: need at least dim^2 = " +
                                    std::to_string(dim * dim) + " vectors, got " +
                                    std::to_string(n));
    }
    const double bound = 2.0 * n * n / (dim * (dim + 1.0));
    constexpr int kMaxRestarts = 20;
    constexpr double kResidualTarget = 1e-10;
    constexpr long kPlateauWindow = 3000;
    const ComplexMatrix target = 2.0 / (dim * (dim + 1.0)) * symmetric_projector(dim);

    VectorMatrix best_v;
    double best_residual = std::numeric_limits<double>::infinity();
    long total_iters = 0;
    int restarts_used = 0;

    for (int restart = 0; restart < kMaxRestarts; ++restart) {
        restarts_used = restart + 1;
        RngStream rng(seed, static_cast<std::uint64_t>(restart));
        VectorMatrix v(dim, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < dim; ++i) v(i, j) = rng.complex_normal();
        normalize_columns(v);

        // Barzilai-Borwein steps, alternating the two step formulas; no line
        // search. The iteration is nonmonotone, so the best iterate seen is
        // kept separately from the current one.
        VectorMatrix g = sphere_gradient(v);
        double tau = 1e-3;
        double restart_best_r = residual_of(v, target);
        VectorMatrix restart_best_v = v;
        long since_improvement = 0;
        for (long it = 0; it < max_iters; ++it) {
            ++total_iters;
            VectorMatrix v_next = v - tau * g;
            normalize_columns(v_next);
            const VectorMatrix g_next = sphere_gradient(v_next);
            const VectorMatrix s = v_next - v;
            const VectorMatrix y = g_next - g;
            const double sy = s.cwiseProduct(y.conjugate()).sum().real();
            const double ss = s.squaredNorm();
            const double yy = y.squaredNorm();
            if (sy > 0.0 && yy > 0.0) {
                tau = (it % 2 == 0) ? ss / sy : sy / yy;
            } else {
                tau = 1e-4;
            }
            tau = std::clamp(tau, 1e-14, 1e3);
            v = v_next;
            g = g_next;
            const double r = residual_of(v, target);
            if (r < restart_best_r) {
                // Only a relative drop resets the plateau counter; floor-level
                // wiggles still update the snapshot but do not count as progress.
                if (r < restart_best_r * (1.0 - 1e-6)) since_improvement = 0;
                restart_best_r = r;
                restart_best_v = v;
            }
            if (restart_best_r <= kResidualTarget) break;
            if (g.norm() < 1e-13) break;
            if (++since_improvement >= kPlateauWindow) break;
        }

        if (restart_best_r < best_residual) {
            best_residual = restart_best_r;
            best_v = restart_best_v;
        }
        if (best_residual <= kResidualTarget) break;
    }

    ProjectiveDesign out = wrap_design(dim, n, best_v);
    if (report) {
        report->frame_potential = frame_potential(out);
        report->bound = bound;
        report->relative_gap = (report->frame_potential - bound) / bound;
        report->iterations = total_iters;
        report->restarts_used = restarts_used;
        report->converged = report->relative_gap <= 1e-12;
    }
    return out;
}

// --- design files ------------------------------------------------------------

std::string design_to_json(const ProjectiveDesign& p) {
    nlohmann::ordered_json j;
    j["dim"] = p.dim;
    j["n"] = p.n;
    j["kind"] = to_string(p.kind);
    nlohmann::ordered_json vectors = nlohmann::ordered_json::array();
    for (const auto& v : p.vectors) {
        nlohmann::ordered_json vec = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            vec.push_back({v(i).real(), v(i).imag()});
        }
        vectors.push_back(vec);
    }
    j["vectors"] = std::move(vectors);
    return j.dump(2) + "\n";
}

ProjectiveDesign design_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ProjectiveDesign p;
    p.dim = j.at("dim").get<int>();
    p.n = j.at("n").get<int>();
    p.kind = design_kind_from_string(j.at("kind").get<std::string>());
    const auto& vectors = j.at("vectors");
    if (static_cast<int>(vectors.size()) != p.n) {
        throw std::invalid_argument("design_from_json: header says n = " +
                                    std::to_string(p.n) + " but file has " +
                                    std::to_string(vectors.size()) + " vectors");
    }
    for (const auto& vec : vectors) {
        if (static_cast<int>(vec.size()) != p.dim) {
            throw std::invalid_argument("design_from_json: vector length does not match dim");
        }
        Eigen::VectorXcd v(p.dim);
        for (int i = 0; i < p.dim; ++i) {
            v(i) = Complex(vec.at(i).at(0).get<double>(), vec.at(i).at(1).get<double>());
        }
        p.vectors.push_back(v);
    }
    return p;
}

void save_design(const ProjectiveDesign& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_design: cannot open " + path);
    out << design_to_json(p);
    if (!out) throw std::runtime_error("save_design: write failed for " + path);
}

ProjectiveDesign load_design(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_design: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return design_from_json(buf.str());
}

}  // namespace qdent
