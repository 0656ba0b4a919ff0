#include "qpulse/fit.hpp"

#include "qpulse/errors.hpp"

#include <cmath>

namespace qpulse {

namespace {

void check_sizes(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("fit: x and y sizes differ");
    if (x.size() < 2) throw ConfigError("fit: need at least two points");
}

FitResult finish(const std::vector<double>& x, const std::vector<double>& y, double slope,
                 double intercept) {
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(y.size());

    double ss_res = 0.0, ss_tot = 0.0, max_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (slope * x[i] + intercept);
        ss_res += r * r;
        ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
        max_res = std::max(max_res, std::abs(r));
    }
    FitResult out;
    out.slope = slope;
    out.intercept = intercept;
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    out.max_abs_residual = max_res;
    return out;
}

} // namespace

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y);
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw NumericError("linear_fit: degenerate abscissa");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return finish(x, y, slope, intercept);
}

FitResult fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (sxx == 0.0) throw NumericError("fit_through_origin: degenerate abscissa");
    return finish(x, y, sxy / sxx, 0.0);
}

FitResult log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y);
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 1e-12 || y[i] < 1e-12)
            throw NumericError("log_log_fit: degenerate input (values below 1e-12)");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linear_fit(lx, ly);
}

} // namespace qpulse
