#include "doctest.h"

#include <array>
#include <cmath>

#include "qdent/states.hpp"

using namespace qdent;

namespace {

double pt_min_eig(const DensityMatrix& rho) {
  return min_eigenvalue(partial_transpose(rho.mat, rho.dims));
}

}  // namespace

TEST_CASE("bell states have the expected entries") {
  DensityMatrix psi_minus = bell_state(BellKind::PsiMinus);
  CHECK(psi_minus.dims == BipartiteDims(2, 2));
  CHECK(std::abs(psi_minus.mat(1, 1).real() - 0.5) < 1e-14);
  CHECK(std::abs(psi_minus.mat(2, 2).real() - 0.5) < 1e-14);
  CHECK(std::abs(psi_minus.mat(1, 2).real() + 0.5) < 1e-14);
  CHECK(std::abs(psi_minus.mat(0, 0)) < 1e-14);

  DensityMatrix psi_plus = bell_state(BellKind::PsiPlus);
  CHECK(std::abs(psi_plus.mat(1, 2).real() - 0.5) < 1e-14);

  DensityMatrix phi_plus = bell_state(BellKind::PhiPlus);
  CHECK(std::abs(phi_plus.mat(0, 3).real() - 0.5) < 1e-14);
  CHECK(std::abs(phi_plus.mat(0, 0).real() - 0.5) < 1e-14);

  DensityMatrix phi_minus = bell_state(BellKind::PhiMinus);
  CHECK(std::abs(phi_minus.mat(0, 3).real() + 0.5) < 1e-14);

  for (BellKind k : {BellKind::PsiMinus, BellKind::PsiPlus,
                     BellKind::PhiMinus, BellKind::PhiPlus}) {
    CHECK(purity(bell_state(k)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(to_string(k).empty());
  }
}

TEST_CASE("noise family interpolates between diagonal noise and the target") {
  DensityMatrix noise = noisy_two_qubit(BellKind::PsiMinus, 0.0);
  CHECK(std::abs(noise.mat(0, 0).real() - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(noise.mat(1, 1).real() - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(noise.mat(2, 2)) < 1e-14);
  CHECK(std::abs(noise.mat(3, 3)) < 1e-14);
  CHECK(pt_min_eig(noise) > -1e-12);

  DensityMatrix full = noisy_two_qubit(BellKind::PhiPlus, 1.0);
  CHECK((full.mat - bell_state(BellKind::PhiPlus).mat).cwiseAbs().maxCoeff() <
        1e-14);

  DensityMatrix mid = noisy_two_qubit(BellKind::PsiMinus, 0.3);
  check_density_matrix(mid);
  CHECK(pt_min_eig(mid) < -1e-3);

  CHECK_THROWS_AS(noisy_two_qubit(BellKind::PsiMinus, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(noisy_two_qubit(BellKind::PsiMinus, 1.1),
                  std::invalid_argument);
}

TEST_CASE("unextendible product basis state is rank four and ppt") {
  DensityMatrix rho = bennett_upb_state();
  CHECK(rho.dims == BipartiteDims(3, 3));
  check_density_matrix(rho);
  CHECK(purity(rho) == doctest::Approx(0.25).epsilon(1e-12));

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat);
  int rank = 0;
  for (int i = 0; i < 9; ++i) {
    double ev = es.eigenvalues()(i);
    if (ev > 1e-10) {
      ++rank;
      CHECK(ev == doctest::Approx(0.25).epsilon(1e-10));
    } else {
      CHECK(std::abs(ev) < 1e-12);
    }
  }
  CHECK(rank == 4);
  CHECK(pt_min_eig(rho) > -1e-12);

  DensityMatrix white = mix_with_white_noise(rho, 0.0);
  CHECK((white.mat - ComplexMatrix::Identity(9, 9) / 9.0)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK_THROWS_AS(mix_with_white_noise(rho, 2.0), std::invalid_argument);
}

TEST_CASE("chessboard construction matches hand computed values") {
  std::array<double, 6> v = {1, 2, 3, 4, 5, 6};
  DensityMatrix rho = chessboard_state(v);
  CHECK(rho.dims == BipartiteDims(3, 3));
  check_density_matrix(rho);
  CHECK(purity(rho) == doctest::Approx(0.328451574366).epsilon(1e-9));
  CHECK(rho.mat(0, 0).real() == doctest::Approx(0.386344923681).epsilon(1e-9));
  CHECK(std::abs(rho.mat(0, 4)) < 1e-12);
  CHECK(pt_min_eig(rho) > -1e-12);

  CHECK_THROWS_AS(chessboard_state({1, 2, 3, 4, 0.0, 6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(chessboard_state({1, 2, 3, 4, 5, 1e-9}),
                  std::invalid_argument);
}

TEST_CASE("parameter sampler respects the degeneracy guard") {
  RngStream s(19, 0);
  for (int i = 0; i < 500; ++i) {
    std::array<double, 6> v = chessboard_parameters(s);
    CHECK(std::abs(v[4]) >= 1e-6);
    CHECK(std::abs(v[5]) >= 1e-6);
    DensityMatrix rho = chessboard_state(v);
    CHECK(pt_min_eig(rho) > -1e-9);
  }
}

TEST_CASE("bound entangled single parameter family") {
  DensityMatrix rho = horodecki_state(0.5);
  check_density_matrix(rho);
  CHECK(purity(rho) == doctest::Approx(0.19).epsilon(1e-12));
  CHECK(pt_min_eig(rho) > -1e-12);
  CHECK_THROWS_AS(horodecki_state(0.0), std::invalid_argument);
  CHECK_THROWS_AS(horodecki_state(1.0), std::invalid_argument);
  CHECK_THROWS_AS(horodecki_state(-0.5), std::invalid_argument);
}

TEST_CASE("random states are valid and reproducible") {
  BipartiteDims dims(2, 2);
  RngStream a(101, 0), b(101, 0), c(101, 1);
  DensityMatrix r1 = random_density_matrix(dims, a);
  DensityMatrix r2 = random_density_matrix(dims, b);
  DensityMatrix r3 = random_density_matrix(dims, c);
  check_density_matrix(r1);
  CHECK((r1.mat - r2.mat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.mat - r3.mat).cwiseAbs().maxCoeff() > 1e-6);

  double purity_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    RngStream s(202, static_cast<std::uint64_t>(i));
    purity_sum += purity(random_density_matrix(dims, s));
  }
  // Hilbert-Schmidt mean purity for two qubits is 8/17.
  CHECK(purity_sum / 1000 == doctest::Approx(8.0 / 17.0).epsilon(0.02));
}

TEST_CASE("npt rejection sampling reports attempts") {
  BipartiteDims dims(2, 2);
  long attempts = 0;
  int samples = 400;
  for (int i = 0; i < samples; ++i) {
    RngStream s(303, static_cast<std::uint64_t>(i));
    DensityMatrix rho = random_npt_sample(dims, s, &attempts);
    CHECK(pt_min_eig(rho) < -1e-12);
  }
  CHECK(attempts >= samples);
  // About 75.7% of Hilbert-Schmidt two-qubit states are NPT.
  double accept_rate = static_cast<double>(samples) / attempts;
  CHECK(accept_rate > 0.65);
  CHECK(accept_rate < 0.85);
}

TEST_CASE("density matrix checks name the violated invariant") {
  DensityMatrix bad{ComplexMatrix::Zero(4, 4), BipartiteDims(2, 2)};
  CHECK_THROWS_AS(check_density_matrix(bad), std::runtime_error);
  CHECK_FALSE(is_valid_density_matrix(bad));

  DensityMatrix negative{ComplexMatrix::Zero(2, 2), BipartiteDims(2, 1)};
  negative.mat(0, 0) = 1.5;
  negative.mat(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density_matrix(negative), std::runtime_error);

  DensityMatrix wrong_shape{ComplexMatrix::Identity(3, 3) / 3.0,
                            BipartiteDims(2, 2)};
  CHECK_THROWS_AS(check_density_matrix(wrong_shape), std::runtime_error);

  CHECK(is_valid_density_matrix(bell_state(BellKind::PsiPlus)));
}
