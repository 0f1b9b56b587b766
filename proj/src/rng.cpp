#include "qdent/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

namespace qdent {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Mixes the pair down to one engine seed; plain concatenation would make
// (s, 0) and (s+1, 0) neighbours, splitmix decorrelates them.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t x = master;
    const std::uint64_t h = splitmix64(x);
    x ^= stream + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return splitmix64(x);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(mix_seed(master_seed, stream_index)) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal(double mean, double stddev) {
    // Box-Muller on the raw uniforms; std::normal_distribution's algorithm is
    // implementation-defined, which would break cross-platform determinism.
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
}

Complex RngStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
}

ComplexMatrix random_ginibre(int dim, RngStream& stream) {
    if (dim < 1) throw std::invalid_argument("random_ginibre: dim must be >= 1");
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = stream.complex_normal();
    return g;
}

ComplexMatrix random_unitary(int dim, RngStream& stream) {
    const ComplexMatrix g = random_ginibre(dim, stream);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    // Fix the phase freedom so the map Ginibre -> unitary is well defined
    // (and Haar): scale each column by the phase of R's diagonal.
    const auto r_diag = qr.matrixQR().diagonal();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r_diag(j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

}  // namespace qdent
