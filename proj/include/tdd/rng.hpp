#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tdd {

/// Seeded random stream. Streams with the same (seed, index) replay the same
/// draws; distinct indices seed the engine from distinct seed sequences.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t index = 0);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t index() const { return index_; }

  /// Child stream, independent of this one and of children with other indices.
  [[nodiscard]] RngStream fork(std::uint64_t child) const;

  double normal();
  double uniform();  // [0, 1)
  std::uint64_t bits() { return engine_(); }

  /// CN(0, var): real and imaginary parts each N(0, var/2).
  std::complex<double> cn(double var = 1.0);

  Eigen::MatrixXcd cn_matrix(Eigen::Index rows, Eigen::Index cols, double var = 1.0);

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace tdd
