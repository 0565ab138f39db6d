#pragma once

#include <random>
#include <vector>

#include "slimrank/matrix.hpp"
#include "slimrank/types.hpp"

namespace slimrank::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng,
                         double lo = -1.0, double hi = 1.0) {
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = lo + (hi - lo) * unit(rng);
    return m;
}

inline Mat random_orthogonal(int n, std::mt19937_64& rng) {
    Mat a = random_matrix(n, n, rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    return q;
}

inline Mat random_spd(int n, std::mt19937_64& rng) {
    Mat a = random_matrix(n, n, rng);
    return a * a.transpose() + 0.5 * Mat::Identity(n, n);
}

inline UserItemMatrix random_user_item(int m, int n, double density,
                                       std::mt19937_64& rng) {
    std::vector<Entry> entries;
    for (int u = 0; u < m; ++u)
        for (int i = 0; i < n; ++i)
            if (unit(rng) < density)
                entries.push_back(Entry{u, i, 0.25 + unit(rng)});
    if (entries.empty()) entries.push_back(Entry{0, 0, 1.0});
    return UserItemMatrix(m, n, std::move(entries));
}

}  // namespace slimrank::testing
