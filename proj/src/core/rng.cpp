#include "tdd/rng.hpp"

#include <cmath>

namespace tdd {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x7464646dU};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t index)
    : seed_(seed), index_(index), engine_(make_engine(seed, index)) {}

RngStream RngStream::fork(std::uint64_t child) const {
  return RngStream(mix(seed_ ^ mix(index_ + 0x632be59bd9b4e019ULL)), child);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

std::complex<double> RngStream::cn(double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

Eigen::MatrixXcd RngStream::cn_matrix(Eigen::Index rows, Eigen::Index cols, double var) {
  Eigen::MatrixXcd out(rows, cols);
  // Row-major fill so that a K x M draw consumes rows in user order.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = cn(var);
  return out;
}

}  // namespace tdd
