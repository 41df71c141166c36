#include "params.hpp"

#include <cmath>

namespace slab {

LabParams::LabParams(int n, std::int64_t lambda, int m, int K, double epsilon)
    : n_(n), lambda_(lambda), m_(m), K_(K), epsilon_(epsilon) {
  if (n < 2) fail_config("LabParams: need n >= 2");
  if (lambda < 2 || (lambda & (lambda - 1)) != 0)
    fail_config("LabParams: lambda must be a power of two >= 2");
  if (m < 1) fail_config("LabParams: need m >= 1");
  if (K < 1) fail_config("LabParams: need K >= 1");
  if (!(epsilon > 0.0)) fail_config("LabParams: need epsilon > 0");
  log2_lambda_ = 0;
  for (std::int64_t v = lambda; v > 1; v >>= 1) ++log2_lambda_;
  // lambda * delta >= 1, i.e. lambda >= 2^{mK}; this also makes every
  // lambda*delta_K^l an integer.
  if (static_cast<std::int64_t>(m) * K > log2_lambda_)
    fail_config("LabParams: lambda*delta < 1 (need log2(lambda) >= m*K)");
  delta_ = std::ldexp(1.0, -m * K);
  delta_k_ = std::ldexp(1.0, -m);
  delta_inv_ = std::ldexp(1.0, m * K);
  q_c_ = (n == 2) ? 6.0 : (n == 3) ? 4.0 : 2.0 * (n + 1) / (n - 1);
}

LabParams LabParams::from_delta(int n, std::int64_t lambda, double delta, int K,
                                double epsilon) {
  if (!(delta > 0.0 && delta < 1.0)) fail_config("LabParams: delta must be in (0,1)");
  int exp = 0;
  const double mant = std::frexp(delta, &exp);  // delta = mant * 2^exp
  if (mant != 0.5) fail_config("LabParams: delta must be a power of two");
  const int j = 1 - exp;  // delta = 2^{-j}
  if (j % K != 0)
    fail_config("LabParams: delta = 2^{-j} must have j divisible by K");
  return LabParams(n, lambda, j / K, K, epsilon);
}

std::int64_t LabParams::side_at(int level) const {
  if (level < 0 || level > K_) fail_config("LabParams: ladder level out of range");
  return (2 * lambda_) >> (m_ * level);
}

std::int64_t LabParams::cubes_per_axis(int level) const {
  return (2 * lambda_) / side_at(level);
}

std::int64_t LabParams::cube_count(int level) const {
  return ipow(cubes_per_axis(level), d());
}

bool LabParams::operator==(const LabParams& o) const {
  return n_ == o.n_ && lambda_ == o.lambda_ && m_ == o.m_ && K_ == o.K_ &&
         epsilon_ == o.epsilon_;
}

}  // namespace slab
