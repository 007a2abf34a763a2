#include "aktest/common.h"

#include <bit>

namespace aktest {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return Mix64(master ^ Mix64(index + 1));
}

std::int64_t PoissonDraw(double mean, Rng& rng) {
  if (!(mean >= 0.0)) throw UsageError("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

std::size_t UniformIndex(std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("UniformIndex: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

double Uniform01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

int Log2Floor(std::uint64_t n) {
  if (n == 0) throw UsageError("Log2Floor(0)");
  return 63 - std::countl_zero(n);
}

bool IsPowerOfTwo(std::uint64_t n) { return std::has_single_bit(n); }

}  // namespace aktest
