#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace slab {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierSynthesis::FourierSynthesis(int dim, std::int64_t n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 4) fail_config("FourierSynthesis: dim out of range");
  size_ = ipow(n, dim);
  buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * size_));
  if (!buf_) fail_invariant("FourierSynthesis: allocation failed");
  std::fill(buf_, buf_ + size_, cplx{});
  int dims[4];
  for (int i = 0; i < dim; ++i) dims[i] = static_cast<int>(n);
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(buf_),
                        reinterpret_cast<fftw_complex*>(buf_), FFTW_BACKWARD,
                        FFTW_ESTIMATE);
  if (!plan_) fail_invariant("FourierSynthesis: planning failed");
}

FourierSynthesis::~FourierSynthesis() {
  if (plan_) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  if (buf_) fftw_free(buf_);
}

std::span<cplx> FourierSynthesis::input() {
  return {buf_, static_cast<std::size_t>(size_)};
}

void FourierSynthesis::execute(std::span<cplx> out) {
  if (out.size() != static_cast<std::size_t>(size_))
    fail_config("FourierSynthesis: output size mismatch");
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::copy(buf_, buf_ + size_, out.data());
  std::fill(buf_, buf_ + size_, cplx{});
}

}  // namespace slab
