#pragma once

#include <cstdint>
#include <random>

#include "qdent/matcore.hpp"

namespace qdent {

/// Counter-seeded random stream. A given (master_seed, stream_index) pair
/// reproduces the same draw sequence on every run and on every platform:
/// the engine is the bit-exact std::mt19937_64 and all variate transforms
/// (uniform doubles, Box-Muller normals) are fixed arithmetic on its output,
/// so no implementation-defined distribution code is involved. Sweeps hand
/// one stream_index to each sample, which makes results independent of how
/// samples are scheduled across workers.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    double uniform();      // [0, 1)
    double uniform_pos();  // (0, 1]
    double normal(double mean = 0.0, double stddev = 1.0);
    Complex complex_normal();  // x + iy with x, y ~ N(0,1)

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

  private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// d x d matrix of independent standard complex Gaussians.
ComplexMatrix random_ginibre(int dim, RngStream& stream);

/// Haar-random unitary (QR of a Ginibre matrix with phase fixing).
ComplexMatrix random_unitary(int dim, RngStream& stream);

}  // namespace qdent
