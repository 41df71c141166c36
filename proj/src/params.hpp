#pragma once

#include <cstdint>

#include "common.hpp"

namespace slab {

// Global parameter bundle: space-time dimension n (spatial d = n-1), frequency
// scale lambda (a power of two), window scale delta = 2^{-mK}, ladder depth K.
// The dyadic representation keeps delta_K = 2^{-m} and every cube side exact.
class LabParams {
 public:
  LabParams(int n, std::int64_t lambda, int m, int K, double epsilon = 0.05);

  // Convenience constructor from a delta value; delta must equal 2^{-mK}
  // exactly for some integer m >= 1.
  static LabParams from_delta(int n, std::int64_t lambda, double delta, int K,
                              double epsilon = 0.05);

  int n() const { return n_; }
  int d() const { return n_ - 1; }
  std::int64_t lambda() const { return lambda_; }
  int log2_lambda() const { return log2_lambda_; }
  int m() const { return m_; }
  int K() const { return K_; }
  double epsilon() const { return epsilon_; }

  double delta() const { return delta_; }        // 2^{-mK}
  double delta_k() const { return delta_k_; }    // 2^{-m}
  double delta_inv() const { return delta_inv_; }  // 2^{mK}, exact
  double q_c() const { return q_c_; }            // 2(n+1)/(n-1)

  // Cube side at ladder level l: 2*lambda*delta_K^l (an even integer for
  // every 0 <= l <= K).
  std::int64_t side_at(int level) const;
  std::int64_t cubes_per_axis(int level) const;  // 2*lambda / side
  std::int64_t cube_count(int level) const;      // per-axis count ^ d

  bool operator==(const LabParams& o) const;

 private:
  int n_;
  std::int64_t lambda_;
  int m_, K_;
  double epsilon_;
  int log2_lambda_;
  double delta_, delta_k_, delta_inv_, q_c_;
};

}  // namespace slab
