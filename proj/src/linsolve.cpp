#include "p2p/linsolve.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace p2p {

namespace {

double inf_norm(const SpMat& A)
{
    Vec rowsum = Vec::Zero(A.rows());
    for (Eigen::Index k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            rowsum[it.row()] += std::abs(it.value());
    return A.rows() ? rowsum.maxCoeff() : 0.0;
}

bool residual_ok(const SpMat& A, const Vec& x, const Vec& rhs)
{
    const double r = (A * x - rhs).lpNorm<Eigen::Infinity>();
    return std::isfinite(r) && r <= 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
}

} // namespace

void LuSolver::factorize(const SpMat& A)
{
    if (A.rows() != A.cols())
        throw DomainError("LuSolver: matrix must be square");
    A_ = A;
    A_.makeCompressed();
    auto lu = std::make_shared<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    lu->analyzePattern(A_);
    lu->factorize(A_);
    if (lu->info() != Eigen::Success)
        throw SingularMatrixError("sparse LU failed: " + lu->lastErrorMessage());
    lu_ = std::move(lu);
}

Vec LuSolver::solve(const Vec& rhs) const
{
    if (!lu_)
        throw DomainError("LuSolver: not factorized");
    if (rhs.size() != A_.rows())
        throw DomainError("LuSolver: rhs length mismatch");
    Vec x = lu_->solve(rhs);
    if (residual_ok(A_, x, rhs))
        return x;
    x += lu_->solve(Vec(rhs - A_ * x));
    if (!residual_ok(A_, x, rhs))
        throw SingularMatrixError("linear solve failed residual check (matrix singular or ill-conditioned)");
    return x;
}

Vec LuSolver::solve_unchecked(const Vec& rhs) const
{
    if (!lu_)
        throw DomainError("LuSolver: not factorized");
    Vec x = lu_->solve(rhs);
    if (!x.allFinite())
        throw SingularMatrixError("linear solve produced non-finite values");
    return x;
}

Eigen::VectorXcd LuSolver::solve(const Eigen::VectorXcd& rhs) const
{
    Vec re = solve(Vec(rhs.real()));
    Vec im = solve(Vec(rhs.imag()));
    Eigen::VectorXcd out(re.size());
    out.real() = re;
    out.imag() = im;
    return out;
}

Vec lss(const SpMat& A, const Vec& rhs)
{
    return LuSolver(A).solve(rhs);
}

SpMat bordered_matrix(const SpMat& A, const Vec& row)
{
    const Eigen::Index n = A.rows();
    if (A.cols() != n + 1 || row.size() != n + 1)
        throw DomainError("bordered_matrix: need A of size n x (n+1) and a row of length n+1");
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros() + n + 1));
    for (Eigen::Index k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index j = 0; j <= n; ++j)
        if (row[j] != 0)
            trip.emplace_back(n, j, row[j]);
    SpMat out(n + 1, n + 1);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

Vec blss(const SpMat& A, const Vec& border_row, double border_rhs, const Vec& rhs)
{
    if (rhs.size() != A.rows())
        throw DomainError("blss: rhs length mismatch");
    Vec full(rhs.size() + 1);
    full << rhs, border_rhs;
    return lss(bordered_matrix(A, border_row), full);
}

double eigen_residual(const SpMat& A, const SpMat& B, std::complex<double> mu, const Eigen::VectorXcd& v)
{
    const Eigen::VectorXcd Av = A.cast<std::complex<double>>() * v;
    const Eigen::VectorXcd Bv = B.cast<std::complex<double>>() * v;
    const double scale = inf_norm(A) + std::abs(mu) * inf_norm(B);
    return (Av - mu * Bv).norm() / (v.norm() * (scale > 0 ? scale : 1.0));
}

namespace {

constexpr double certify_tol = 1e-6;

void finish(Spectrum& s, const SpMat& A, const SpMat& B, int k)
{
    std::vector<int> order(static_cast<std::size_t>(s.values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(s.values[a]) < std::abs(s.values[b]); });
    k = std::min<int>(k, static_cast<int>(order.size()));
    Eigen::VectorXcd vals(k);
    Eigen::MatrixXcd vecs(s.vectors.rows(), k);
    for (int i = 0; i < k; ++i) {
        vals[i] = s.values[order[i]];
        vecs.col(i) = s.vectors.col(order[i]).normalized();
        // fix the phase: largest entry real and positive
        Eigen::Index imax;
        vecs.col(i).cwiseAbs().maxCoeff(&imax);
        const std::complex<double> ph = vecs(imax, i) / std::abs(vecs(imax, i));
        vecs.col(i) /= ph;
    }
    s.values = vals;
    s.vectors = vecs;
    s.ineg = 0;
    s.certified = true;
    s.max_residual = 0;
    for (int i = 0; i < k; ++i) {
        if (s.values[i].real() < 0)
            ++s.ineg;
        const double r = eigen_residual(A, B, s.values[i], s.vectors.col(i));
        s.max_residual = std::max(s.max_residual, r);
        if (!(r <= certify_tol))
            s.certified = false;
    }
}

Spectrum dense_spectrum(const SpMat& A, const SpMat& B, int k)
{
    const Mat Bd(B);
    Eigen::LDLT<Mat> ldlt(Bd);
    if (ldlt.info() != Eigen::Success)
        throw SingularMatrixError("spectrum: mass matrix factorization failed");
    const Mat C = ldlt.solve(Mat(A));
    Eigen::EigenSolver<Mat> es(C, true);
    if (es.info() != Eigen::Success)
        throw SingularMatrixError("spectrum: dense eigensolver did not converge");
    Spectrum s;
    s.values = es.eigenvalues();
    s.vectors = es.eigenvectors();
    finish(s, A, B, k);
    return s;
}

Vec start_vector(Eigen::Index n)
{
    std::mt19937 gen(20140601u);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = static_cast<double>(gen()) / 4294967296.0 - 0.5;
    return v.normalized();
}

Spectrum arnoldi_spectrum(const SpMat& A, const SpMat& B, int k)
{
    const Eigen::Index n = A.rows();
    double shift = 0;
    LuSolver lu;
    try {
        lu.factorize(A);
    } catch (const SingularMatrixError&) {
        const double nb = inf_norm(B);
        shift = -1e-6 * inf_norm(A) / (nb > 0 ? nb : 1.0);
        lu.factorize(SpMat(A - shift * B));
    }

    const Vec v0 = start_vector(n);
    Eigen::Index m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * k + 20, 40));
    const Eigen::Index m_cap = std::min<Eigen::Index>(n, 1200);
    Spectrum best;
    for (;;) {
        Mat V = Mat::Zero(n, m + 1);
        Mat H = Mat::Zero(m + 1, m);
        V.col(0) = v0;
        Eigen::Index used = m;
        for (Eigen::Index j = 0; j < m; ++j) {
            Vec w = lu.solve_unchecked(Vec(B * V.col(j)));
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index i = 0; i <= j; ++i) {
                    const double h = V.col(i).dot(w);
                    H(i, j) += h;
                    w -= h * V.col(i);
                }
            }
            const double beta = w.norm();
            H(j + 1, j) = beta;
            if (beta < 1e-14 * std::abs(H(j, j)) || beta == 0) {
                used = j + 1;
                break;
            }
            V.col(j + 1) = w / beta;
        }
        Eigen::EigenSolver<Mat> es(H.topLeftCorner(used, used), true);
        const Eigen::VectorXcd theta = es.eigenvalues();
        const Eigen::MatrixXcd Y = es.eigenvectors();

        Spectrum s;
        s.values.resize(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i)
            s.values[i] = shift + 1.0 / theta[i];
        s.vectors = V.leftCols(used).cast<std::complex<double>>() * Y;
        finish(s, A, B, k);
        best = s;
        if (s.certified || m >= m_cap || used < m)
            break;
        m = std::min<Eigen::Index>(m_cap, 2 * m);
    }
    return best;
}

} // namespace

Spectrum spectrum_near_zero(const SpMat& A, const SpMat& B, int neig, int dense_limit)
{
    if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
        throw DomainError("spectrum_near_zero: matrices must be square of equal size");
    if (neig < 1)
        throw DomainError("spectrum_near_zero: neig must be positive");
    const int k = static_cast<int>(std::min<Eigen::Index>(neig, A.rows()));
    if (A.rows() <= dense_limit)
        return dense_spectrum(A, B, k);
    return arnoldi_spectrum(A, B, k);
}

} // namespace p2p
