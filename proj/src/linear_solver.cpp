#include "wabc/linear_solver.hpp"

#include <cmath>
#include <sstream>

namespace wabc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

[[noreturn]] void breakdown(const std::string& what) {
    throw NumericalError(NumericalError::Kind::SolverBreakdown, "solver breakdown: " + what);
}

}  // namespace

SolveStats solve_spd(const SparseMatrix& a, std::span<const double> rhs, std::span<double> x, const SolveOptions& opts) {
    if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("solve_spd: rel_tol must be positive");
    const std::size_t n = a.size();
    const std::size_t max_iters = opts.max_iters ? opts.max_iters : 10 * n;

    std::vector<double> inv_diag(n, 1.0);
    if (opts.preconditioner == Preconditioner::Diagonal) {
        const auto d = a.diagonal();
        for (std::size_t i = 0; i < n; ++i) {
            if (!(d[i] > 0.0)) breakdown("indefinite detected (non-positive diagonal)");
            inv_diag[i] = 1.0 / d[i];
        }
    }

    SolveStats stats;
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return stats;
    }
    const double target = opts.rel_tol * bnorm;

    std::vector<double> r(n), z(n), p(n), q(n);
    a.multiply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
    double rnorm = std::sqrt(dot(r, r));
    if (rnorm <= target) {
        stats.relative_residual = rnorm / bnorm;
        return stats;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    for (std::size_t it = 1; it <= max_iters; ++it) {
        a.multiply(p, q);
        const double curvature = dot(p, q);
        if (!(curvature > 0.0)) breakdown("indefinite detected");
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rnorm = std::sqrt(dot(r, r));
        stats.iterations = it;
        if (rnorm <= target) {
            stats.relative_residual = rnorm / bnorm;
            return stats;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    std::ostringstream msg;
    msg << "max iterations (" << max_iters << ") reached, relative residual " << rnorm / bnorm;
    breakdown(msg.str());
}

std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> rhs, const SolveOptions& opts) {
    std::vector<double> x(a.size(), 0.0);
    solve_spd(a, rhs, x, opts);
    return x;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
    DenseMatrix d(a.size());
    const auto rp = a.pattern().row_ptr();
    const auto ci = a.pattern().col_idx();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (auto k = rp[i]; k < rp[i + 1]; ++k)
            d(i, static_cast<std::size_t>(ci[static_cast<std::size_t>(k)])) = a.values()[static_cast<std::size_t>(k)];
    return d;
}

std::vector<double> solve_dense_spd(DenseMatrix a, std::span<const double> rhs) {
    const std::size_t n = a.n;
    // In-place lower Cholesky factor.
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0)) breakdown("indefinite detected");
        const double l = std::sqrt(d);
        a(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / l;
        }
    }
    std::vector<double> y(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= a(i, k) * y[k];
        y[i] /= a(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) y[i] -= a(k, i) * y[k];
        y[i] /= a(i, i);
    }
    return y;
}

}  // namespace wabc
