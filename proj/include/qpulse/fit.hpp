#pragma once

// Ordinary least squares on small deterministic samples.

#include <vector>

namespace qpulse {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_abs_residual = 0.0;
};

/// y ~ slope * x + intercept.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// y ~ slope * x (intercept pinned to 0); r_squared stays the centered one.
FitResult fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

/// Power law: linear_fit of log y vs log x. Throws NumericError when any
/// value is below 1e-12 (degenerate input; nothing to fit).
FitResult log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qpulse
