#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode : int { invariant = 1, config = 2, io = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail_invariant(const std::string& msg);
[[noreturn]] void fail_config(const std::string& msg);
[[noreturn]] void fail_io(const std::string& msg);

// Fixed-tree pairwise reduction. The tree shape depends only on n, so results
// are bit-identical regardless of threading or chunking upstream.
template <class T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Worker-count knob for parallel_for; results never depend on it.
void set_threads(int k);
int threads();

// Runs fn(i) for i in [0, n), contiguous chunks per worker. Each index must
// write only to its own preallocated slot.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

std::uint64_t splitmix64(std::uint64_t& state);
// Decorrelated stream seed for (seed, stream id) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform in (0, 1]; never returns 0 so logs are safe.
double u01(std::uint64_t& state);

// Smallest N >= lo with no prime factor beyond 5 (fast FFT sizes).
std::int64_t fft_friendly_size(std::int64_t lo);

std::int64_t ipow(std::int64_t base, int exp);

// Shortest text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace slab
