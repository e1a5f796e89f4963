#pragma once

#include <cstdint>
#include <random>

#include "holonomy/common.hpp"

namespace holonomy {

/// Seeded source of random states and unitaries. Identical seeds give
/// identical sequences on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  Complex complex_normal();

  /// Haar-distributed element of U(D) (QR of a Ginibre matrix, phases fixed).
  CMatrix haar_unitary(int dim);
  CMatrix special_unitary(int dim);
  /// Haar-distributed element of SO(D), returned as a complex matrix.
  CMatrix special_orthogonal(int dim);
  CMatrix group_element(Group group, int dim);

  /// Random Hermitian matrix with entries of unit scale.
  CMatrix hermitian(int dim);

  CVector pure_vector(int dim);
  /// Pure state projector on C^{d_a} x C^{d_b}.
  CMatrix pure_density(int d_a, int d_b);
  /// Hilbert-Schmidt distributed mixed state: partial trace of a random
  /// pure state on (d_a d_b) x (d_a d_b).
  CMatrix mixed_density(int d_a, int d_b);
  /// rho_A (x) rho_B with both factors random mixed.
  CMatrix product_density(int d_a, int d_b);
  /// Real (rebit) mixed two-qubit state.
  CMatrix rebit_density();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace holonomy
