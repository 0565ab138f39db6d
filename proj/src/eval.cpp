#include "slimrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "slimrank/errors.hpp"

namespace slimrank {

std::string EvaluationReport::to_kv() const {
    std::ostringstream out;
    out << "n=" << n << "\n"
        << "hr=" << hr << "\n"
        << "arhr=" << arhr << "\n"
        << "hits=" << hits << "\n"
        << "users_evaluated=" << users_evaluated << "\n";
    for (std::size_t f = 0; f < per_fold.size(); ++f)
        out << "fold" << f << ".hr=" << per_fold[f].hr << "\n"
            << "fold" << f << ".arhr=" << per_fold[f].arhr << "\n";
    return out.str();
}

std::string EvaluationReport::tsv_header() {
    return "n\thr\tarhr\thits\tusers_evaluated";
}

std::string EvaluationReport::to_tsv_row() const {
    std::ostringstream out;
    out << n << '\t' << hr << '\t' << arhr << '\t' << hits << '\t'
        << users_evaluated;
    return out.str();
}

Mat score_users(const UserItemMatrix& x_train, const CoefficientMatrix& w) {
    if (w.size() != x_train.n_items())
        throw std::invalid_argument("score_users: dimension mismatch");
    return x_train.sparse() * w.values();
}

std::vector<RankedList> top_n(const UserItemMatrix& x_train, const Mat& scores,
                              int n) {
    if (n < 1) throw std::invalid_argument("top_n: n must be >= 1");
    if (scores.rows() != x_train.n_users() ||
        scores.cols() != x_train.n_items())
        throw std::invalid_argument("top_n: score matrix shape mismatch");

    const int n_items = x_train.n_items();
    const Vec popularity = x_train.column_sums();

    std::vector<RankedList> lists;
    lists.reserve(x_train.n_users());
    std::vector<int> candidates;
    for (int u = 0; u < x_train.n_users(); ++u) {
        const auto rated = x_train.user_items(u);
        const bool cold = rated.empty();

        candidates.clear();
        candidates.reserve(n_items - rated.size());
        std::size_t r = 0;
        for (int j = 0; j < n_items; ++j) {
            if (r < rated.size() && rated[r] == j) {
                ++r;
                continue;
            }
            candidates.push_back(j);
        }

        auto score_of = [&](int j) {
            return cold ? popularity(j) : scores(u, j);
        };
        auto better = [&](int a, int b) {
            const double sa = score_of(a), sb = score_of(b);
            if (sa != sb) return sa > sb;
            return a < b;   // deterministic tie-break: ascending index
        };

        const std::size_t take = std::min<std::size_t>(n, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + take,
                          candidates.end(), better);
        candidates.resize(take);
        lists.push_back(RankedList{u, candidates});
    }
    return lists;
}

EvaluationReport evaluate(const std::vector<RankedList>& lists,
                          const std::vector<Entry>& test, int n) {
    if (n < 1) throw std::invalid_argument("evaluate: n must be >= 1");

    std::unordered_map<int, const RankedList*> by_user;
    by_user.reserve(lists.size());
    for (const RankedList& l : lists) by_user.emplace(l.user, &l);

    std::unordered_map<int, int> seen;
    for (const Entry& t : test) {
        if (++seen[t.user] > 1)
            throw std::invalid_argument(
                "evaluate: test user " + std::to_string(t.user) +
                " has more than one held-out item (leave-one-out expected)");
    }

    EvaluationReport rep;
    rep.n = n;
    rep.users_evaluated = static_cast<long>(test.size());
    double reciprocal_sum = 0.0;
    for (const Entry& t : test) {
        auto it = by_user.find(t.user);
        if (it == by_user.end())
            throw MissingList("evaluate: no ranked list for test user " +
                              std::to_string(t.user));
        const auto& items = it->second->items;
        const auto hit = std::find(items.begin(), items.end(), t.item);
        if (hit != items.end()) {
            rep.hits += 1;
            const long pos = 1 + std::distance(items.begin(), hit);
            reciprocal_sum += 1.0 / static_cast<double>(pos);
        }
    }
    if (rep.users_evaluated > 0) {
        rep.hr = static_cast<double>(rep.hits) / rep.users_evaluated;
        rep.arhr = reciprocal_sum / rep.users_evaluated;
    }
    return rep;
}

EvaluationReport aggregate_folds(const std::vector<EvaluationReport>& folds) {
    if (folds.empty())
        throw std::invalid_argument("aggregate_folds: no folds");
    EvaluationReport rep;
    rep.n = folds.front().n;
    double weighted_arhr = 0.0;
    for (const EvaluationReport& f : folds) {
        if (f.n != rep.n)
            throw std::invalid_argument("aggregate_folds: mixed list lengths");
        rep.per_fold.push_back({f.hr, f.arhr});
        rep.hits += f.hits;
        rep.users_evaluated += f.users_evaluated;
        weighted_arhr += f.arhr * static_cast<double>(f.users_evaluated);
    }
    if (rep.users_evaluated > 0) {
        rep.hr = static_cast<double>(rep.hits) / rep.users_evaluated;
        rep.arhr = weighted_arhr / static_cast<double>(rep.users_evaluated);
    }
    return rep;
}

CoefficientMatrix item_knn(const UserItemMatrix& x_train, int k) {
    if (k < 1) throw std::invalid_argument("item_knn: k must be >= 1");
    const int n = x_train.n_items();

    // cosine similarity = Gram matrix of the column-normalized X
    Mat g = gram(x_train);
    Vec norms = g.diagonal().cwiseSqrt();
    Mat sim(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double d = norms(i) * norms(j);
            sim(i, j) = d > 0.0 ? g(i, j) / d : 0.0;
        }
        sim(j, j) = 0.0;
    }

    // keep the k largest similarities per column
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) {
        std::iota(order.begin(), order.end(), 0);
        const int keep = std::min(k, n - 1);
        std::nth_element(order.begin(), order.begin() + keep, order.end(),
                         [&](int a, int b) {
                             if (sim(a, j) != sim(b, j))
                                 return sim(a, j) > sim(b, j);
                             return a < b;
                         });
        for (int r = keep; r < n; ++r) sim(order[r], j) = 0.0;
    }
    return CoefficientMatrix(std::move(sim));
}

}  // namespace slimrank
