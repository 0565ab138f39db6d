// Acceptance suite: one criterion per case, one PASS/FAIL/SKIP line each.
//
//   acceptance                 runs every criterion
//   acceptance --criterion K   runs one (exit 0 pass, 1 fail, 77 skip)
//
// Criteria 6 and 7 need the ML100K ratings file (u.data). Its location is
// taken from $SLIMRANK_ML100K or data/ml100k/u.data; when absent those
// criteria report SKIP with instructions instead of failing.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "slimrank/data.hpp"
#include "slimrank/errors.hpp"
#include "slimrank/eval.hpp"
#include "slimrank/prox.hpp"
#include "slimrank/solver.hpp"

using namespace slimrank;
using slimrank::testing::grid_search_prox;
using slimrank::testing::prox_objective;

namespace {

struct Outcome {
    bool pass = false;
    bool skip = false;
    std::string detail;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string ml100k_path() {
    if (const char* env = std::getenv("SLIMRANK_ML100K")) return env;
    return "data/ml100k/u.data";
}

bool ml100k_available() {
    return std::filesystem::exists(ml100k_path());
}

constexpr const char* kMl100kHint =
    "ML100K not found; fetch ml-100k.zip from the GroupLens dataset archive "
    "and place u.data at data/ml100k/u.data (or set SLIMRANK_ML100K)";

// The bundled planted instance and the solver configuration frozen for
// criteria 4 and 8.
PlantedInstance bundled_planted() { return synth_planted(200, 40, 2, 3, 0.0, 7); }

SolverConfig planted_config() {
    SolverConfig cfg;
    cfg.alpha = 0.3;
    cfg.beta = 0.5;
    cfg.delta = 0.1;
    cfg.mu0 = 1.0;
    cfg.gamma = 1.1;
    cfg.mu_max = 1e10;
    cfg.feas_tolerance = 1e-4;
    cfg.feas_scale_by_w = false;   // the criterion gap bound is absolute
    cfg.max_outer = 300;
    cfg.seed = 5;
    return cfg;
}

// ---- criterion 1: quadrature of the surrogate-vs-step error equals d/2 --

Outcome criterion1() {
    for (double delta : {1.0, 0.1, 0.01}) {
        const double measured = surrogate_step_error(delta);
        const double expected = delta / 2.0;
        if (std::abs(measured - expected) > 1e-3 * expected)
            return {false, false,
                    "delta=" + std::to_string(delta) + " quadrature " +
                        std::to_string(measured) + " vs " +
                        std::to_string(expected)};
    }
    return {true, false, "quadrature matches delta/2 for delta in {1, 0.1, 0.01}"};
}

// ---- criterion 2: scalar prox vs dense grid search ----------------------

Outcome criterion2() {
    std::mt19937_64 rng(2024);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double deltas[3] = {0.05, 0.1, 0.5};

    const int cases = 1000;
    int stationary = 0, near_global = 0, not_worse = 0;
    for (int c = 0; c < cases; ++c) {
        const double a = 10.0 * unit();
        const double beta = 5.0 * unit();
        const double mu = 0.1 + 9.9 * unit();
        const double delta = deltas[static_cast<int>(unit() * 3.0)];

        Vec sigma_a(1);
        sigma_a << a;
        DcResult res;
        try {
            res = dc_prox_scalar(sigma_a, {delta, beta}, mu, 1e-8, 100);
        } catch (const MaxInnerIterationsExceeded&) {
            continue;   // counts as non-stationary
        }
        if (std::abs(res.stationarity_residual) <= 1e-6) ++stationary;

        const double s = res.sigma_star(0);
        const double got = prox_objective(s, a, beta, mu, delta);
        const double best = prox_objective(grid_search_prox(a, beta, mu, delta),
                                           a, beta, mu, delta);
        if (got <= best + 1e-4) ++near_global;
        if (got <= prox_objective(a, a, beta, mu, delta) + 1e-12) ++not_worse;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "stationary %d/%d, near-global %d/%d, never-worse %d/%d",
                  stationary, cases, near_global, cases, not_worse, cases);
    const bool pass =
        stationary == cases && near_global >= cases * 9 / 10 && not_worse == cases;
    return {pass, false, buf};
}

// ---- criterion 3: block updates decrease their subproblem objectives ----

Outcome criterion3() {
    std::mt19937_64 rng(33);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto rand_mat = [&](int r, int c, double lo, double hi) {
        Mat m(r, c);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < r; ++i) m(i, j) = lo + (hi - lo) * unit();
        return m;
    };

    std::vector<Entry> entries;
    for (int u = 0; u < 12; ++u)
        for (int i = 0; i < 8; ++i)
            if (unit() < 0.45) entries.push_back(Entry{u, i, 0.25 + unit()});
    UserItemMatrix x(12, 8, entries);
    Mat xd = Mat(x.sparse());
    Mat g = gram(x);

    SolverConfig cfg;
    cfg.alpha = 0.4;
    cfg.beta = 0.6;
    cfg.delta = 0.1;

    for (int trial = 0; trial < 100; ++trial) {
        SolverState s;
        s.W = rand_mat(8, 8, -1.0, 1.0);
        s.W.diagonal().setZero();
        s.Z1 = rand_mat(8, 8, -1.0, 1.0);
        s.Z2 = rand_mat(8, 8, -1.0, 1.0);
        s.Z3 = rand_mat(8, 8, 0.0, 1.0);
        s.Y1 = rand_mat(8, 8, -1.0, 1.0);
        s.Y2 = rand_mat(8, 8, -1.0, 1.0);
        s.Y3 = rand_mat(8, 8, -1.0, 1.0);
        s.mu = 0.5 + 3.0 * unit();

        auto w_obj = [&](const Mat& w) {
            double v = 0.5 * (xd - xd * w).squaredNorm();
            v += 0.5 * s.mu * (s.Z1 - w + s.Y1 / s.mu).squaredNorm();
            v += 0.5 * s.mu * (s.Z2 - w + s.Y2 / s.mu).squaredNorm();
            v += 0.5 * s.mu * (s.Z3 - w + s.Y3 / s.mu).squaredNorm();
            return v;
        };
        SolverConfig raw = cfg;
        raw.diag_mode = DiagMode::ProjectAtEnd;
        Mat w_new = update_w(s, g, raw);

        Mat system = g + 3.0 * s.mu * Mat::Identity(8, 8);
        Mat rhs = s.mu * (s.Z1 + s.Z2 + s.Z3) + (s.Y1 + s.Y2 + s.Y3) + g;
        if ((system * w_new - rhs).norm() > 1e-8 * rhs.norm())
            return {false, false, "W-solve residual above 1e-8 relative"};
        if (w_obj(w_new) > w_obj(s.W) * (1.0 + 1e-9))
            return {false, false, "W update increased the Eq.-6 objective"};

        auto z1_obj = [&](const Mat& z) {
            return cfg.alpha * z.cwiseAbs().sum() +
                   0.5 * s.mu * (z - (s.W - s.Y1 / s.mu)).squaredNorm();
        };
        auto z2_obj = [&](const Mat& z) {
            return cfg.beta * rank_surrogate(singular_values(z), cfg.delta) +
                   0.5 * s.mu * (z - (s.W - s.Y2 / s.mu)).squaredNorm();
        };
        auto z3_obj = [&](const Mat& z) {
            if (z.minCoeff() < 0.0)
                return std::numeric_limits<double>::infinity();
            return 0.5 * s.mu * (z - (s.W - s.Y3 / s.mu)).squaredNorm();
        };
        if (z1_obj(update_z1(s, cfg)) > z1_obj(s.Z1) + 1e-10)
            return {false, false, "Z1 update increased its objective"};
        if (z2_obj(update_z2(s, cfg)) > z2_obj(s.Z2) + 1e-10)
            return {false, false, "Z2 update increased its objective"};
        if (z3_obj(update_z3(s, cfg)) > z3_obj(s.Z3) + 1e-10)
            return {false, false, "Z3 update increased its objective"};
    }
    return {true, false, "100 random iterates: all four block updates decrease"};
}

// ---- criterion 4: feasibility + planted recovery at desk scale ----------

Outcome criterion4() {
    PlantedInstance inst = bundled_planted();
    SolverConfig cfg = planted_config();

    SolveReport rep = solve(inst.x, cfg);
    if (!rep.converged || rep.outer_iterations > 300 ||
        rep.final_feasibility_gap > 1e-4) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "no feasibility: converged=%d iters=%d gap=%.3e",
                      rep.converged ? 1 : 0, rep.outer_iterations,
                      rep.final_feasibility_gap);
        return {false, false, buf};
    }

    Mat xd = Mat(inst.x.sparse());
    const double rel = (xd - xd * rep.final_w.values()).norm() / xd.norm();
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "gap %.2e in %d iters, relative reconstruction %.4f",
                  rep.final_feasibility_gap, rep.outer_iterations, rel);
    return {rel < 0.1, false, buf};
}

// ---- criterion 5: metric identities + no-training-item guarantee --------

Outcome criterion5() {
    // all hits at rank 1 -> ARHR = HR
    {
        std::vector<RankedList> lists = {{0, {5, 1, 2}}, {1, {7, 3, 4}}};
        std::vector<Entry> test = {{0, 5, 1.0}, {1, 7, 1.0}};
        EvaluationReport rep = evaluate(lists, test, 3);
        if (rep.arhr != rep.hr) return {false, false, "ARHR != HR at rank 1"};
    }
    // all hits at rank N -> ARHR = HR/N
    {
        const int n = 4;
        std::vector<RankedList> lists = {{0, {1, 2, 3, 9}}, {1, {4, 5, 6, 8}}};
        std::vector<Entry> test = {{0, 9, 1.0}, {1, 8, 1.0}};
        EvaluationReport rep = evaluate(lists, test, n);
        if (rep.arhr != rep.hr / n)
            return {false, false, "ARHR != HR/N at rank N"};
    }
    // exhaustive no-training-item check on a random instance
    std::mt19937_64 rng(55);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Entry> entries;
    for (int u = 0; u < 50; ++u)
        for (int i = 0; i < 30; ++i)
            if (unit() < 0.3) entries.push_back(Entry{u, i, 1.0 + unit()});
    UserItemMatrix x(50, 30, entries);
    Mat scores(50, 30);
    for (int j = 0; j < 30; ++j)
        for (int i = 0; i < 50; ++i) scores(i, j) = unit();
    for (int n : {1, 5, 10, 29, 30}) {
        auto lists = top_n(x, scores, n);
        for (const RankedList& l : lists)
            for (int item : l.items)
                if (x.rated(l.user, item))
                    return {false, false, "top_n recommended a training item"};
    }
    return {true, false,
            "ARHR identities exact; top_n never returns training items"};
}

// ---- ML100K protocol helpers --------------------------------------------

struct Ml100kScores {
    double hr = 0.0;
    double arhr = 0.0;
};

template <typename Fn>
void parallel_folds(int count, int jobs, Fn&& fn) {
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto body = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, count); ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

UserItemMatrix load_ml100k() {
    LoadedDataset ds = load_triplets(ml100k_path());
    if (ds.matrix.n_users() != 943 || ds.matrix.n_items() != 1682 ||
        ds.matrix.n_entries() != 100000)
        throw Error("ML100K shape mismatch: expected 943 users, 1682 items, "
                    "100000 transactions");
    return std::move(ds.matrix);
}

// 5-fold leave-one-out, the model per fold supplied by `fit`
template <typename Fit>
Ml100kScores ml100k_protocol(const UserItemMatrix& x, Fit&& fit, int jobs) {
    auto folds = split_folds(x, 5, 42);
    std::vector<EvaluationReport> reports(folds.size());
    parallel_folds(static_cast<int>(folds.size()), jobs, [&](int f) {
        CoefficientMatrix w = fit(folds[f].train, f);
        Mat scores = score_users(folds[f].train, w);
        auto lists = top_n(folds[f].train, scores, 10);
        reports[f] = evaluate(lists, folds[f].test, 10);
    });
    EvaluationReport agg = aggregate_folds(reports);
    return {agg.hr, agg.arhr};
}

// ---- criterion 6: ItemKNN sanity band ------------------------------------

Outcome criterion6() {
    if (!ml100k_available()) return {false, true, kMl100kHint};
    UserItemMatrix x = load_ml100k();
    Ml100kScores s = ml100k_protocol(
        x, [](const UserItemMatrix& train, int) { return item_knn(train, 10); },
        2);
    char buf[128];
    std::snprintf(buf, sizeof buf, "ItemKNN k=10: HR@10=%.4f ARHR=%.4f", s.hr,
                  s.arhr);
    const bool pass = s.hr >= 0.237 && s.hr <= 0.337 && s.arhr >= 0.094 &&
                      s.arhr <= 0.154;
    return {pass, false, buf};
}

// ---- criterion 7: main-result band + ordering vs ItemKNN -----------------

Outcome criterion7() {
    if (!ml100k_available()) return {false, true, kMl100kHint};
    UserItemMatrix x = load_ml100k();

    Ml100kScores knn = ml100k_protocol(
        x, [](const UserItemMatrix& train, int) { return item_knn(train, 10); },
        2);

    SolverConfig cfg;   // defaults carry the Table-2 ML100K row
    cfg.alpha = 200.0;
    cfg.beta = 0.2;
    cfg.delta = 0.1;
    cfg.mu0 = 700.0;
    cfg.gamma = 1.1;
    cfg.max_outer = 300;
    Ml100kScores ours = ml100k_protocol(
        x,
        [&](const UserItemMatrix& train, int fold) {
            SolveReport rep = solve(train, cfg, [fold](int it, double mu,
                                                       double gap, double) {
                if (it % 20 == 0)
                    std::fprintf(stderr,
                                 "  [criterion 7, fold %d] iter %d mu %.2e "
                                 "gap %.2e\n",
                                 fold, it, mu, gap);
            });
            return rep.final_w;
        },
        2);

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "ours: HR@10=%.4f ARHR=%.4f | ItemKNN HR@10=%.4f (margin "
                  "%+.4f)",
                  ours.hr, ours.arhr, knn.hr, ours.hr - knn.hr);
    const bool pass =
        ours.hr >= 0.38 && ours.hr >= knn.hr + 0.05 && ours.arhr >= 0.17;
    return {pass, false, buf};
}

// ---- criterion 8: bitwise determinism of the planted solve ---------------

Outcome criterion8() {
    PlantedInstance inst = bundled_planted();
    SolverConfig cfg = planted_config();
    SolveReport a = solve(inst.x, cfg);
    SolveReport b = solve(inst.x, cfg);
    if (a.objective_trace.size() != b.objective_trace.size())
        return {false, false, "trace lengths differ"};
    if (std::memcmp(a.objective_trace.data(), b.objective_trace.data(),
                    a.objective_trace.size() * sizeof(double)) != 0)
        return {false, false, "objective traces are not bitwise identical"};
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "two runs, %zu trace entries, bitwise identical",
                  a.objective_trace.size());
    return {true, false, buf};
}

using CriterionFn = Outcome (*)();
constexpr CriterionFn kCriteria[] = {criterion1, criterion2, criterion3,
                                     criterion4, criterion5, criterion6,
                                     criterion7, criterion8};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc)
            only = std::atoi(argv[++a]);
    }

    bool any_fail = false, any_skip = false;
    for (int k = 1; k <= 8; ++k) {
        if (only != 0 && k != only) continue;
        const double t0 = now_seconds();
        Outcome out;
        try {
            out = kCriteria[k - 1]();
        } catch (const std::exception& e) {
            out = {false, false, std::string("exception: ") + e.what()};
        }
        const double dt = now_seconds() - t0;
        const char* verdict = out.skip ? "SKIP" : (out.pass ? "PASS" : "FAIL");
        std::printf("criterion %d: %s (%.1fs) — %s\n", k, verdict, dt,
                    out.detail.c_str());
        std::fflush(stdout);
        if (out.skip)
            any_skip = true;
        else if (!out.pass)
            any_fail = true;
    }

    if (any_fail) return 1;
    if (only != 0 && any_skip) return 77;   // ctest SKIP_RETURN_CODE
    return 0;
}
