#pragma once

#include <cstdint>
#include <span>

#include "common.hpp"

namespace slab {

// d-dimensional unnormalized backward DFT (Fourier synthesis):
//   out[j] = sum_k in[k] * e^{+2*pi*i <j,k>/n}.
// Plans use FFTW_ESTIMATE only, so the chosen algorithm (and hence the exact
// floating-point result) is reproducible across runs. Plan creation is
// serialized internally; execution on distinct instances is thread-safe.
class FourierSynthesis {
 public:
  FourierSynthesis(int dim, std::int64_t n);
  ~FourierSynthesis();
  FourierSynthesis(const FourierSynthesis&) = delete;
  FourierSynthesis& operator=(const FourierSynthesis&) = delete;

  int dim() const { return dim_; }
  std::int64_t n() const { return n_; }
  std::int64_t size() const { return size_; }

  std::span<cplx> input();           // zeroed after each execute
  void execute(std::span<cplx> out);  // out.size() == size()

 private:
  int dim_;
  std::int64_t n_, size_;
  void* plan_ = nullptr;
  cplx* buf_ = nullptr;
};

}  // namespace slab
