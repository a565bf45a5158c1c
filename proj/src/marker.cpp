#include "ethdyn/marker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ethdyn/errors.hpp"

namespace ethdyn::marker {

void validate(const MarkerParams& p) {
    if (!std::isfinite(p.a0) || p.a0 < 0.0) {
        throw DomainError("marker: a0 must be finite and >= 0");
    }
    if (!std::isfinite(p.tf) || p.tf <= 0.0) {
        throw DomainError("marker: tf must be finite and > 0");
    }
    if (!std::isfinite(p.cf) || p.cf <= 0.0) {
        throw DomainError("marker: cf must be finite and > 0");
    }
}

double marker_value(double age, const MarkerParams& p) {
    validate(p);
    if (!std::isfinite(age) || age < 0.0) {
        throw DomainError("marker: age must be finite and >= 0");
    }
    const double exponent = (p.a0 - age) / (p.tf * p.cf);
    // exp overflows just above log(DBL_MAX) ~ 709.78
    if (exponent > std::log(std::numeric_limits<double>::max())) {
        return 0.0;
    }
    return 1.0 / (1.0 + std::exp(exponent));
}

MarkerCurve marker_curve(double age_start, double age_end, std::size_t n_samples,
                         const MarkerParams& p) {
    if (n_samples < 2) {
        throw DomainError("marker_curve: n_samples must be >= 2");
    }
    if (!(age_start < age_end)) {
        throw DomainError("marker_curve: age_start must be < age_end");
    }
    validate(p);

    MarkerCurve curve;
    curve.ages.reserve(n_samples);
    curve.values.reserve(n_samples);
    const double span = age_end - age_start;
    const double last = static_cast<double>(n_samples - 1);
    for (std::size_t i = 0; i < n_samples; ++i) {
        // pin the last sample so the endpoint is exact
        const double age = (i + 1 == n_samples)
                               ? age_end
                               : age_start + span * (static_cast<double>(i) / last);
        curve.ages.push_back(age);
        curve.values.push_back(marker_value(age, p));
    }
    return curve;
}

double max_slope(const MarkerCurve& curve) {
    double best = 0.0;
    for (std::size_t i = 1; i < curve.ages.size(); ++i) {
        const double slope = (curve.values[i] - curve.values[i - 1]) /
                             (curve.ages[i] - curve.ages[i - 1]);
        best = std::max(best, slope);
    }
    return best;
}

} // namespace ethdyn::marker
