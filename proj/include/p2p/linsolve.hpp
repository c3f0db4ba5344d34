#pragma once

#include "p2p/types.hpp"

#include <Eigen/SparseLU>

#include <complex>
#include <memory>

namespace p2p {

/// Sparse LU factorization with partial pivoting, reusable across solves.
class LuSolver {
public:
    LuSolver() = default;
    explicit LuSolver(const SpMat& A) { factorize(A); }

    void factorize(const SpMat& A);
    /// Solves A x = rhs; one step of iterative refinement is applied when the
    /// residual check ||A x - rhs||_inf <= 1e-8 (1 + ||rhs||_inf) fails, and
    /// SingularMatrixError is thrown if it still fails.
    Vec solve(const Vec& rhs) const;
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
    /// Plain LU solve without the residual check, for inverse iterations on
    /// nearly singular matrices.
    Vec solve_unchecked(const Vec& rhs) const;
    bool ready() const { return lu_ != nullptr; }
    Eigen::Index size() const { return A_.rows(); }

private:
    SpMat A_;
    std::shared_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
};

Vec lss(const SpMat& A, const Vec& rhs);

/// The square matrix [A; row^T] for A of size n x (n+1).
SpMat bordered_matrix(const SpMat& A, const Vec& row);

/// Solves [A; row^T] x = [rhs; border_rhs].
Vec blss(const SpMat& A, const Vec& border_row, double border_rhs, const Vec& rhs);

struct Spectrum {
    Eigen::VectorXcd values;   // ordered by increasing magnitude
    Eigen::MatrixXcd vectors;  // columns match values
    int ineg = 0;              // number of returned values with negative real part
    bool certified = true;     // all returned pairs passed the residual check
    double max_residual = 0;   // max of ||A v - mu B v|| / (||v|| * scale)
};

/// Eigenvalues of A v = mu B v closest to zero (B symmetric positive definite).
///
/// Dense QR iteration for n <= dense_limit, otherwise shift-invert Arnoldi at
/// shift 0 with explicit restarts of growing Krylov dimension.
Spectrum spectrum_near_zero(const SpMat& A, const SpMat& B, int neig, int dense_limit = 600);

/// Relative residual scale used for certification: ||A||_inf + |mu| ||B||_inf.
double eigen_residual(const SpMat& A, const SpMat& B, std::complex<double> mu, const Eigen::VectorXcd& v);

} // namespace p2p
