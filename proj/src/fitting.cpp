#include "fitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace slab {

FitResult fit_scaling(std::span<const QuotientRecord> records,
                      const std::string& predictor) {
  if (predictor != "lambda" && predictor != "delta")
    fail_config("fit_scaling: predictor must be 'lambda' or 'delta'");
  std::map<double, double> max_by_x;
  for (const auto& r : records) {
    const double x =
        predictor == "lambda" ? static_cast<double>(r.lambda) : r.delta;
    auto [it, fresh] = max_by_x.emplace(x, r.quotient);
    if (!fresh) it->second = std::max(it->second, r.quotient);
  }
  if (max_by_x.size() < 3)
    fail_config("fit_scaling: need at least 3 distinct predictor values");
  FitResult fit;
  for (const auto& [x, y] : max_by_x) {
    if (!(x > 0.0 && y > 0.0))
      fail_config("fit_scaling: non-positive value in log-log fit");
    fit.abscissae.push_back(x);
    fit.max_quotients.push_back(y);
  }
  const std::size_t m = fit.abscissae.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(fit.abscissae[i]);
    const double ly = std::log(fit.max_quotients[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) fail_config("fit_scaling: degenerate design");
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0.0, sxx_c = 0.0;
  const double mean_x = sx / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(fit.abscissae[i]);
    const double r =
        std::log(fit.max_quotients[i]) - (fit.intercept + fit.slope * lx);
    fit.residuals.push_back(r);
    ss += r * r;
    sxx_c += (lx - mean_x) * (lx - mean_x);
  }
  if (m > 2 && sxx_c > 0.0) fit.stderr_slope = std::sqrt(ss / (m - 2) / sxx_c);
  return fit;
}

}  // namespace slab
