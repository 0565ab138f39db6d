#pragma once

#include <string>
#include <vector>

#include "slimrank/matrix.hpp"
#include "slimrank/types.hpp"

namespace slimrank {

/// Recommendation list for one user, best first. Never contains items the
/// user already rated in the training matrix.
struct RankedList {
    int user = 0;
    std::vector<int> items;
};

struct FoldScore {
    double hr = 0.0;
    double arhr = 0.0;
};

/// HR/ARHR at list length n. hr = hits / users_evaluated;
/// hr/n <= arhr <= hr whenever hits > 0.
struct EvaluationReport {
    int n = 0;
    double hr = 0.0;
    double arhr = 0.0;
    long hits = 0;
    long users_evaluated = 0;
    std::vector<FoldScore> per_fold;

    /// Line-oriented key=value block.
    std::string to_kv() const;
    /// One tab-separated row: n, hr, arhr, hits, users_evaluated.
    std::string to_tsv_row() const;
    static std::string tsv_header();
};

/// Predicted score matrix X_hat = X_train * W (dense m×n).
Mat score_users(const UserItemMatrix& x_train, const CoefficientMatrix& w);

/// Top-n unrated items per user by descending score, ties broken by
/// ascending item index. Users with no training interactions are ranked by
/// item popularity (column sums of x_train) instead of their all-zero score
/// row. Fewer than n items come back only when fewer than n unrated exist.
std::vector<RankedList> top_n(const UserItemMatrix& x_train, const Mat& scores,
                              int n);

/// Scores ranked lists against one held-out item per user (the Entry value
/// is ignored). Throws MissingList if a test user has no list.
EvaluationReport evaluate(const std::vector<RankedList>& lists,
                          const std::vector<Entry>& test, int n);

/// Mean HR/ARHR across folds; per_fold keeps the individual scores.
EvaluationReport aggregate_folds(const std::vector<EvaluationReport>& folds);

/// Reference item-based kNN baseline: cosine similarity between item
/// columns, top-k kept per column, zero diagonal.
CoefficientMatrix item_knn(const UserItemMatrix& x_train, int k);

}  // namespace slimrank
