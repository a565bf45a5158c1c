#pragma once

#include <cstddef>
#include <vector>

namespace ethdyn::marker {

/// Logistic marker parameters. TF and CF only ever appear as the product
/// tf * cf, but both are kept so presets read like the figure legends.
struct MarkerParams {
    double a0 = 50.0; ///< midpoint age in years
    double tf = 0.1;  ///< transition factor
    double cf = 70.0; ///< circumstantial factor
};

struct MarkerCurve {
    std::vector<double> ages;
    std::vector<double> values;
};

/// Throws DomainError unless a0 >= 0 and tf, cf are finite and positive.
void validate(const MarkerParams& p);

/// 1 / (1 + exp((a0 - age) / (tf * cf))). Saturates to exactly 0 when the
/// exponential would overflow.
double marker_value(double age, const MarkerParams& p);

/// Uniform samples over [age_start, age_end], both endpoints included.
MarkerCurve marker_curve(double age_start, double age_end, std::size_t n_samples,
                         const MarkerParams& p);

/// Largest forward-difference slope of a curve.
double max_slope(const MarkerCurve& curve);

inline constexpr std::size_t kDefaultSamples = 1001;

} // namespace ethdyn::marker
