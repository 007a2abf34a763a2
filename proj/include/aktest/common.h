#ifndef AKTEST_COMMON_H_
#define AKTEST_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace aktest {

// Bad arguments or violated preconditions. The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value does not fit the numeric type it has to be returned in.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Exact search requested beyond the documented enumeration caps.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;
using Point = std::vector<double>;

// SplitMix64 finalizer. Used to derive independent per-trial seeds.
std::uint64_t Mix64(std::uint64_t x);

// Seed for trial `index` of a run with master seed `master`:
// Mix64(master ^ Mix64(index + 1)). Serial and parallel runs agree on it.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

// Draws from Poisson(mean); mean == 0 yields 0.
std::int64_t PoissonDraw(double mean, Rng& rng);

// Uniform integer in [0, n).
std::size_t UniformIndex(std::size_t n, Rng& rng);

double Uniform01(Rng& rng);

// floor(log2(n)) for n >= 1; exact for powers of two.
int Log2Floor(std::uint64_t n);

bool IsPowerOfTwo(std::uint64_t n);

}  // namespace aktest

#endif  // AKTEST_COMMON_H_
