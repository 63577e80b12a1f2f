#pragma once

#include "wabc/errors.hpp"
#include "wabc/sparse.hpp"

#include <span>
#include <vector>

namespace wabc {

enum class Preconditioner { None, Diagonal };

struct SolveOptions {
    double rel_tol = 1e-10;
    std::size_t max_iters = 0;  // 0 -> 10 n
    Preconditioner preconditioner = Preconditioner::Diagonal;
};

struct SolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for a symmetric positive definite A.
/// `x` holds the initial guess on entry and the solution on exit.
/// Throws NumericalError(SolverBreakdown) with "indefinite detected" when a
/// search direction has non-positive curvature, and "max iterations" when
/// the tolerance is not reached.
SolveStats solve_spd(const SparseMatrix& a, std::span<const double> rhs, std::span<double> x,
                     const SolveOptions& opts = {});

std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> rhs, const SolveOptions& opts = {});

/// Row-major dense matrix for small systems.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    explicit DenseMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}
    static DenseMatrix from_sparse(const SparseMatrix& a);

    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Cholesky factorization solve; throws "indefinite detected" on a
/// non-positive pivot.
std::vector<double> solve_dense_spd(DenseMatrix a, std::span<const double> rhs);

}  // namespace wabc
