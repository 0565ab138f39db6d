#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "slimrank/matrix.hpp"
#include "slimrank/prox.hpp"
#include "slimrank/types.hpp"

namespace slimrank {

/// When the zero-diagonal constraint on W is enforced.
enum class DiagMode {
    ProjectEachIter,   // zero diag(W) after every W solve (default)
    ProjectAtEnd,      // only on the reported model
};

/// Which matrix becomes the reported model at termination.
enum class FinalW {
    ProjectedW,   // max(W, 0) with zero diagonal (default)
    Z3,           // the nonnegative split variable
};

struct SolverConfig {
    double alpha = 200.0;          // l1 weight
    double beta = 0.2;             // rank-surrogate weight
    double delta = 0.1;            // surrogate accuracy control
    double mu0 = 700.0;            // initial penalty
    double gamma = 1.1;            // penalty growth rate, > 1
    double mu_max = 1e10;          // penalty cap
    double feas_tolerance = 1e-4;  // stop when the split gap falls below this
    bool feas_scale_by_w = true;   // scale the tolerance by max(1, ||W||_inf)
    int max_outer = 300;
    double dc_tolerance = 1e-8;
    int max_inner = 100;
    std::uint64_t seed = 0;        // iterate initialization
    DiagMode diag_mode = DiagMode::ProjectEachIter;
    FinalW final_w = FinalW::ProjectedW;

    void validate() const;   // throws std::invalid_argument
};

/// All iterates of the split problem plus convergence diagnostics.
struct SolverState {
    Mat W, Z1, Z2, Z3;        // primal blocks
    Mat Y1, Y2, Y3;           // Lagrange multipliers
    double mu = 0.0;
    int outer_iteration = 0;
    double feasibility_gap = 0.0;     // max_i ||Z_i - W||_inf
    std::vector<double> objective_trace;
    std::vector<double> min_w_trace;  // min entry of W per iteration
};

struct SolveReport {
    CoefficientMatrix final_w;
    bool converged = false;
    int outer_iterations = 0;
    double final_feasibility_gap = 0.0;
    std::vector<double> objective_trace;
    std::vector<double> min_w_trace;
    double wall_time_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Per-iteration progress hook: (iteration, mu, feasibility gap, objective).
using ProgressCallback =
    std::function<void(int, double, double, double)>;

/// W <- (3 mu I + X^T X)^{-1} [mu (Z1+Z2+Z3) + (Y1+Y2+Y3) + X^T X],
/// diagonal zeroed afterwards under DiagMode::ProjectEachIter.
Mat update_w(const SolverState& state, const Mat& gram,
             const SolverConfig& config);

/// Z1 <- soft_threshold(W - Y1/mu, alpha/mu).
Mat update_z1(const SolverState& state, const SolverConfig& config);

/// Z2 <- rank_prox(W - Y2/mu) with weight beta and penalty mu.
Mat update_z2(const SolverState& state, const SolverConfig& config);

/// Z3 <- max(W - Y3/mu, 0).
Mat update_z3(const SolverState& state, const SolverConfig& config);

/// Y_i += mu (Z_i - W); mu <- min(gamma mu, mu_max); recomputes the
/// feasibility gap and advances the iteration counter.
void update_multipliers_and_mu(SolverState& state, const SolverConfig& config);

/// Finite part of the model objective at W:
/// 1/2 ||X - XW||_F^2 + alpha ||W||_1 + beta f(sigma(W)).
double model_objective(const UserItemMatrix& x, const Mat& w,
                       const SolverConfig& config);

/// Runs the full augmented-Lagrangian loop on X. Blocks W, Z1, Z2, Z3 are
/// updated in turn, multipliers ascend, and the penalty grows geometrically
/// until the split variables agree with W within the tolerance or max_outer
/// is reached. Iterates are initialized with Z1 = Z2 = Z3 = one seeded
/// uniform [0,1) matrix and Y_i = 0.
SolveReport solve(const UserItemMatrix& x, const SolverConfig& config,
                  const ProgressCallback& progress = {});

}  // namespace slimrank
