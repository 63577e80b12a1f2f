#include "wabc/excitation.hpp"

#include <cmath>
#include <numbers>

namespace wabc {

DirichletTrace excitation_signal(double t, double amplitude, double frequency) {
    const double w = 2.0 * std::numbers::pi * frequency;
    const double s = std::sin(w * t);
    const double c = std::cos(w * t);
    if (t >= 2.0 / frequency) return {amplitude * s, amplitude * w * c, -amplitude * w * w * s};
    const double r = 0.25 * frequency * frequency * amplitude;
    return {r * t * t * s, r * (2.0 * t * s + t * t * w * c), r * (2.0 * s + 4.0 * t * w * c - t * t * w * w * s)};
}

double gaussian_source(double x, double y, double t, const GaussianSourceSpec& spec) {
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.centers.size(); ++j) {
        const double dx = (x - spec.centers[j][0]) / spec.sigma_x;
        const double dy = (y - spec.centers[j][1]) / spec.sigma_y;
        sum += spec.weights[j] * std::exp(-dx * dx - dy * dy);
    }
    return spec.amplitude * std::sin(2.0 * std::numbers::pi * spec.frequency * t) * sum;
}

}  // namespace wabc
