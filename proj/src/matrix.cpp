#include "slimrank/matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slimrank/errors.hpp"

namespace slimrank {

UserItemMatrix::UserItemMatrix(int n_users, int n_items,
                               std::vector<Entry> entries)
    : n_users_(n_users), n_items_(n_items), entries_(std::move(entries)) {
    if (n_users_ < 0 || n_items_ < 0)
        throw std::invalid_argument("UserItemMatrix: negative dimensions");

    for (const Entry& e : entries_) {
        if (e.user < 0 || e.user >= n_users_ || e.item < 0 ||
            e.item >= n_items_)
            throw std::invalid_argument(
                "UserItemMatrix: entry index out of range (user " +
                std::to_string(e.user) + ", item " + std::to_string(e.item) +
                ")");
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw std::invalid_argument(
                "UserItemMatrix: entry values must be finite and > 0");
    }

    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) {
                  return std::tie(a.user, a.item) < std::tie(b.user, b.item);
              });
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].user == entries_[i - 1].user &&
            entries_[i].item == entries_[i - 1].item)
            throw std::invalid_argument(
                "UserItemMatrix: duplicate (user, item) pair (" +
                std::to_string(entries_[i].user) + ", " +
                std::to_string(entries_[i].item) + ")");

    row_ptr_.assign(static_cast<std::size_t>(n_users_) + 1, 0);
    for (const Entry& e : entries_) ++row_ptr_[static_cast<std::size_t>(e.user) + 1];
    for (int u = 0; u < n_users_; ++u)
        row_ptr_[static_cast<std::size_t>(u) + 1] += row_ptr_[u];
    csr_items_.reserve(entries_.size());
    csr_values_.reserve(entries_.size());
    for (const Entry& e : entries_) {
        csr_items_.push_back(e.item);
        csr_values_.push_back(e.value);
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(entries_.size());
    for (const Entry& e : entries_) trips.emplace_back(e.user, e.item, e.value);
    csc_.resize(n_users_, n_items_);
    csc_.setFromTriplets(trips.begin(), trips.end());
    csc_.makeCompressed();
}

double UserItemMatrix::density() const {
    const double cells = double(n_users_) * double(n_items_);
    return cells > 0 ? double(entries_.size()) / cells : 0.0;
}

std::span<const int> UserItemMatrix::user_items(int u) const {
    const std::size_t b = row_ptr_[u], e = row_ptr_[static_cast<std::size_t>(u) + 1];
    return {csr_items_.data() + b, e - b};
}

std::span<const double> UserItemMatrix::user_values(int u) const {
    const std::size_t b = row_ptr_[u], e = row_ptr_[static_cast<std::size_t>(u) + 1];
    return {csr_values_.data() + b, e - b};
}

Vec UserItemMatrix::column_sums() const {
    Vec sums = Vec::Zero(n_items_);
    for (const Entry& e : entries_) sums(e.item) += e.value;
    return sums;
}

bool UserItemMatrix::rated(int user, int item) const {
    const auto items = user_items(user);
    return std::binary_search(items.begin(), items.end(), item);
}

Mat gram(const UserItemMatrix& x) {
    const auto& s = x.sparse();
    Eigen::SparseMatrix<double> g = Eigen::SparseMatrix<double>(s.transpose()) * s;
    Mat dense = Mat(g);
    // symmetrize away round-off so downstream Cholesky sees an exactly
    // symmetric matrix
    dense = ((dense + dense.transpose()) * 0.5).eval();
    return dense;
}

Mat solve_spd(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("solve_spd: A must be square");
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve_spd: A and B row counts differ");
    Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite(
            "solve_spd: Cholesky factorization failed (matrix not positive "
            "definite)");
    return llt.solve(b);
}

SvdResult svd(const Mat& a) {
    Eigen::BDCSVD<Mat> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success)
        throw ConvergenceFailure("svd: decomposition did not converge");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Vec singular_values(const Mat& a) {
    Eigen::BDCSVD<Mat> dec(a);
    if (dec.info() != Eigen::Success)
        throw ConvergenceFailure("singular_values: decomposition did not converge");
    return dec.singularValues();
}

void ensure_finite(const Mat& m, const std::string& context) {
    if (!m.allFinite())
        throw NonFinite(context + ": matrix contains NaN/Inf");
}

}  // namespace slimrank
