#ifndef DFRC_RNG_HPP
#define DFRC_RNG_HPP

#include <complex>
#include <cstdint>
#include <Eigen/Dense>

namespace dfrc {

// Seedable counter-style generator with named substreams. Every stochastic
// component (channel, FIR taps, symbols, noise, initial points) draws from
// its own substream so runs are reproducible piecewise. The Gaussian variates
// come from Box-Muller on 53-bit uniforms, so the byte stream depends only on
// the seed, not on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Child generator independent of this one; deterministic in (seed, id).
  Rng substream(std::uint64_t id) const;
  Rng substream(std::uint64_t id, std::uint64_t id2) const;

  std::uint64_t next_u64();
  double uniform();                 // [0, 1)
  double uniform(double lo, double hi);
  double normal();                  // N(0, 1)
  std::complex<double> complex_normal();  // CN(0, 1)
  Eigen::VectorXcd complex_normal_vector(int n);
  Eigen::MatrixXcd complex_normal_matrix(int rows, int cols);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace dfrc

#endif
