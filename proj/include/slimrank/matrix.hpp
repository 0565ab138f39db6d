#pragma once

#include <Eigen/SparseCore>
#include <span>
#include <string>
#include <vector>

#include "slimrank/types.hpp"

namespace slimrank {

/// Sparse m×n user-item matrix X. Absent entries mean 0; stored entries are
/// strictly positive. Entries are kept as a coordinate list sorted by
/// (user, item) plus a compiled column-major (CSC) index for products.
class UserItemMatrix {
public:
    UserItemMatrix(int n_users, int n_items, std::vector<Entry> entries);

    int n_users() const { return n_users_; }
    int n_items() const { return n_items_; }
    std::size_t n_entries() const { return entries_.size(); }
    double density() const;

    const std::vector<Entry>& entries() const { return entries_; }

    /// Items rated by user u, ascending; parallel to user_values(u).
    std::span<const int> user_items(int u) const;
    std::span<const double> user_values(int u) const;

    /// Column-major sparse view, shared by all matrix kernels.
    const Eigen::SparseMatrix<double>& sparse() const { return csc_; }

    /// Column sums (item popularity).
    Vec column_sums() const;

    bool rated(int user, int item) const;

private:
    int n_users_ = 0;
    int n_items_ = 0;
    std::vector<Entry> entries_;           // sorted by (user, item)
    std::vector<std::size_t> row_ptr_;     // CSR index into entries_
    std::vector<int> csr_items_;           // entries_[i].item, contiguous
    std::vector<double> csr_values_;
    Eigen::SparseMatrix<double> csc_;
};

/// X^T X, the n×n Gram matrix of item columns (dense, symmetric PSD).
Mat gram(const UserItemMatrix& x);

/// Solves A Z = B for symmetric positive-definite A via Cholesky.
/// Throws NotPositiveDefinite if the factorization fails.
Mat solve_spd(const Mat& a, const Mat& b);

struct SvdResult {
    Mat left_vectors;      // U, orthonormal columns
    Vec singular_values;   // non-increasing, >= 0
    Mat right_vectors;     // V, orthonormal columns
};

/// Full SVD A = U diag(sigma) V^T. Throws ConvergenceFailure if the
/// decomposition does not converge.
SvdResult svd(const Mat& a);

/// Singular values only (no U/V); cheaper when just sigma(A) is needed.
Vec singular_values(const Mat& a);

/// Throws NonFinite when `m` contains NaN/Inf; `context` names the offender.
void ensure_finite(const Mat& m, const std::string& context);

}  // namespace slimrank
