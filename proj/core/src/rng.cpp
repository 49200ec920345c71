#include "dfrc/rng.hpp"

#include <cmath>
#include <numbers>

namespace dfrc {

namespace {

// splitmix64, used both as the stream engine and for seed mixing.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x632be59bd9b4e019ULL + (b << 1));
  std::uint64_t r = splitmix64(s);
  return r ^ b;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
  // warm up so nearby seeds decorrelate
  for (int i = 0; i < 4; ++i) (void)splitmix64(state_);
}

Rng Rng::substream(std::uint64_t id) const { return Rng(mix(seed_, id)); }

Rng Rng::substream(std::uint64_t id, std::uint64_t id2) const {
  return Rng(mix(mix(seed_, id), id2));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; u1 shifted away from zero so the log is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_normal() {
  double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = uniform();
  double r = std::sqrt(-std::log(u1));  // per-component variance 1/2
  return {r * std::cos(2.0 * std::numbers::pi * u2),
          r * std::sin(2.0 * std::numbers::pi * u2)};
}

Eigen::VectorXcd Rng::complex_normal_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

Eigen::MatrixXcd Rng::complex_normal_matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = complex_normal();
  return m;
}

}  // namespace dfrc
