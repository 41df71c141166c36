#include "common.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace slab {

void fail_invariant(const std::string& msg) { throw Error(ErrorCode::invariant, msg); }
void fail_config(const std::string& msg) { throw Error(ErrorCode::config, msg); }
void fail_io(const std::string& msg) { throw Error(ErrorCode::io, msg); }

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int k) { g_threads.store(k < 1 ? 1 : k); }
int threads() { return g_threads.load(); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  const int nw = static_cast<int>(std::min<std::int64_t>(threads(), n));
  if (nw <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nw);
  std::atomic<const char*> first_error{nullptr};
  const std::int64_t chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    workers.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        first_error.store("worker threw");
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error.load()) fail_invariant("parallel_for: worker raised an error");
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
  splitmix64(s);
  return s;
}

double u01(std::uint64_t& state) {
  const std::uint64_t bits = splitmix64(state) >> 11;  // 53 random bits
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

std::int64_t fft_friendly_size(std::int64_t lo) {
  if (lo < 1) lo = 1;
  for (std::int64_t n = lo;; ++n) {
    std::int64_t m = n;
    while (m % 2 == 0) m /= 2;
    while (m % 3 == 0) m /= 3;
    while (m % 5 == 0) m /= 5;
    if (m == 1) return n;
  }
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace slab
