#pragma once

#include "wabc/integrator.hpp"

#include <array>
#include <vector>

namespace wabc {

/// Growing modulated sine on the excitation boundary:
///   g(t) = (f^2/4) t^2 A sin(w t)  for t < 2/f,   A sin(w t) afterwards,
/// with w = 2 pi f. Derivatives are analytic on each piece.
DirichletTrace excitation_signal(double t, double amplitude, double frequency);

/// Volumetric source A sin(w t) sum_j weight_j exp(-((x-x_j)/sx)^2 - ((y-y_j)/sy)^2).
struct GaussianSourceSpec {
    double amplitude = 0.0;
    double frequency = 0.0;
    std::vector<std::array<double, 2>> centers;
    std::vector<double> weights;
    double sigma_x = 5e-4;
    double sigma_y = 5e-4;
};

double gaussian_source(double x, double y, double t, const GaussianSourceSpec& spec);

}  // namespace wabc
