#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace slimrank {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// One observed user-item interaction. `value` is a rating, or 1.0 for
/// implicit feedback.
struct Entry {
    int user = 0;
    int item = 0;
    double value = 1.0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Item-item aggregation matrix W: user u's score for item j is
/// x_u^T * column_j(W). Zero diagonal, nonnegative entries.
class CoefficientMatrix {
public:
    explicit CoefficientMatrix(Mat values);

    int size() const { return static_cast<int>(values_.rows()); }
    const Mat& values() const { return values_; }

private:
    Mat values_;
};

}  // namespace slimrank
