#pragma once

#include <stdexcept>

namespace wabc {

/// Material constants of the Westervelt equation in potential form. The
/// derived coefficients delta = b/c^2 and k = (B/A + 2)/c^2 are always
/// recomputed from the primaries.
class PhysParams {
public:
    PhysParams(double c, double b, double rho, double b_over_a) : c_(c), b_(b), rho_(rho), b_over_a_(b_over_a) {
        if (!(c > 0.0)) throw std::invalid_argument("sound speed c must be positive");
        if (!(rho > 0.0)) throw std::invalid_argument("density rho must be positive");
        if (!(b >= 0.0)) throw std::invalid_argument("sound diffusivity b must be nonnegative");
        if (!(b_over_a >= 0.0)) throw std::invalid_argument("B/A must be nonnegative");
    }

    /// c = 1500 m/s, b = 6e-9 m^2/s, rho = 1000 kg/m^3, B/A = 5.
    static PhysParams water() { return {1500.0, 6e-9, 1000.0, 5.0}; }

    double c() const { return c_; }
    double b() const { return b_; }
    double rho() const { return rho_; }
    double b_over_a() const { return b_over_a_; }
    double delta() const { return b_ / (c_ * c_); }
    /// Zero for a linearized material.
    double k() const { return linear_ ? 0.0 : (b_over_a_ + 2.0) / (c_ * c_); }

    /// Same material with the quadratic nonlinearity switched off (k = 0).
    /// k = (B/A + 2)/c^2 cannot vanish for B/A >= 0, so linear runs carry an
    /// explicit override.
    PhysParams linearized() const {
        PhysParams p = *this;
        p.linear_ = true;
        return p;
    }
    bool linear() const { return linear_; }

private:
    double c_;
    double b_;
    double rho_;
    double b_over_a_;
    bool linear_ = false;
};

}  // namespace wabc
