#pragma once

#include "records.hpp"

namespace slab {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;  // in log coordinates
  double stderr_slope = 0.0;
  std::vector<double> abscissae;  // distinct predictor values, ascending
  std::vector<double> max_quotients;
  std::vector<double> residuals;  // log-space, per abscissa
};

// Ordinary least squares of log(max quotient per predictor value) against
// log(predictor). predictor is "lambda" (default) or "delta"; needs at least
// three distinct values.
FitResult fit_scaling(std::span<const QuotientRecord> records,
                      const std::string& predictor = "lambda");

}  // namespace slab
