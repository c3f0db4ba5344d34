#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace p2p {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Triplets = std::vector<Triplet>;

/// Invalid arguments: shapes, indices, preconditions on user input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear system could not be solved (zero pivot or failed residual check).
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Persistence problems: unreadable or inconsistent point files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SpMat sparse_identity(Eigen::Index n)
{
    SpMat I(n, n);
    I.setIdentity();
    return I;
}

} // namespace p2p
