#include "slimrank/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "slimrank/data.hpp"
#include "slimrank/errors.hpp"

namespace slimrank {

CoefficientMatrix::CoefficientMatrix(Mat values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
        throw std::invalid_argument("CoefficientMatrix: must be square");
    if (!values_.allFinite())
        throw std::invalid_argument("CoefficientMatrix: non-finite entries");
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
        if (values_(i, i) != 0.0)
            throw std::invalid_argument(
                "CoefficientMatrix: diagonal must be exactly zero");
    if ((values_.array() < 0.0).any())
        throw std::invalid_argument("CoefficientMatrix: negative entries");
}

void SolverConfig::validate() const {
    if (!(gamma > 1.0)) throw std::invalid_argument("SolverConfig: gamma must be > 1");
    if (!(mu0 > 0.0)) throw std::invalid_argument("SolverConfig: mu0 must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("SolverConfig: delta must be > 0");
    if (alpha < 0.0) throw std::invalid_argument("SolverConfig: alpha must be >= 0");
    if (beta < 0.0) throw std::invalid_argument("SolverConfig: beta must be >= 0");
    if (!(mu_max > 0.0)) throw std::invalid_argument("SolverConfig: mu_max must be > 0");
    if (!(feas_tolerance > 0.0))
        throw std::invalid_argument("SolverConfig: feas_tolerance must be > 0");
    if (max_outer < 1) throw std::invalid_argument("SolverConfig: max_outer must be >= 1");
    if (!(dc_tolerance > 0.0))
        throw std::invalid_argument("SolverConfig: dc_tolerance must be > 0");
    if (max_inner < 1) throw std::invalid_argument("SolverConfig: max_inner must be >= 1");
}

Mat update_w(const SolverState& state, const Mat& gram,
             const SolverConfig& config) {
    const double mu = state.mu;
    if (!(mu > 0.0)) throw std::invalid_argument("update_w: mu must be > 0");
    Mat system = gram;
    system.diagonal().array() += 3.0 * mu;
    Mat rhs = mu * (state.Z1 + state.Z2 + state.Z3) +
              (state.Y1 + state.Y2 + state.Y3) + gram;
    Mat w = solve_spd(system, rhs);
    if (config.diag_mode == DiagMode::ProjectEachIter)
        w.diagonal().setZero();
    return w;
}

Mat update_z1(const SolverState& state, const SolverConfig& config) {
    return soft_threshold(state.W - state.Y1 / state.mu,
                          config.alpha / state.mu);
}

Mat update_z2(const SolverState& state, const SolverConfig& config) {
    return rank_prox(state.W - state.Y2 / state.mu,
                     {config.delta, config.beta}, state.mu,
                     config.dc_tolerance, config.max_inner);
}

Mat update_z3(const SolverState& state, const SolverConfig&) {
    return nonneg_project(state.W - state.Y3 / state.mu);
}

namespace {

double split_gap(const SolverState& s) {
    const double g1 = (s.Z1 - s.W).cwiseAbs().maxCoeff();
    const double g2 = (s.Z2 - s.W).cwiseAbs().maxCoeff();
    const double g3 = (s.Z3 - s.W).cwiseAbs().maxCoeff();
    return std::max({g1, g2, g3});
}

}  // namespace

void update_multipliers_and_mu(SolverState& state, const SolverConfig& config) {
    state.Y1 += state.mu * (state.Z1 - state.W);
    state.Y2 += state.mu * (state.Z2 - state.W);
    state.Y3 += state.mu * (state.Z3 - state.W);
    state.mu = std::min(config.gamma * state.mu, config.mu_max);
    state.outer_iteration += 1;
    state.feasibility_gap = split_gap(state);
}

double model_objective(const UserItemMatrix& x, const Mat& w,
                       const SolverConfig& config) {
    // 1/2 ||X - XW||_F^2 with X applied sparsely
    Mat xw = x.sparse() * w;
    for (const Entry& e : x.entries()) xw(e.user, e.item) -= e.value;
    const double fit = 0.5 * xw.squaredNorm();
    const double l1 = config.alpha * w.cwiseAbs().sum();
    const double rank_term =
        config.beta > 0.0
            ? config.beta * rank_surrogate(singular_values(w), config.delta)
            : 0.0;
    return fit + l1 + rank_term;
}

SolveReport solve(const UserItemMatrix& x, const SolverConfig& config,
                  const ProgressCallback& progress) {
    config.validate();
    if (x.n_entries() == 0)
        throw std::invalid_argument("solve: X has no entries");

    const auto t_start = std::chrono::steady_clock::now();
    const int n = x.n_items();

    SolverState state;
    state.mu = config.mu0;

    // Z1 = Z2 = Z3 = one seeded uniform [0,1) matrix, Y_i = 0
    Rng rng(config.seed);
    Mat init(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) init(i, j) = rng.next_unit();
    state.Z1 = init;
    state.Z2 = init;
    state.Z3 = std::move(init);
    state.Y1 = Mat::Zero(n, n);
    state.Y2 = state.Y1;
    state.Y3 = state.Y1;
    state.W = Mat::Zero(n, n);

    const Mat g = gram(x);

    bool converged = false;
    while (state.outer_iteration < config.max_outer) {
        state.W = update_w(state, g, config);
        state.Z1 = update_z1(state, config);
        state.Z2 = update_z2(state, config);
        state.Z3 = update_z3(state, config);
        update_multipliers_and_mu(state, config);

        ensure_finite(state.W, "solve: W at iteration " +
                                   std::to_string(state.outer_iteration));

        const double objective = model_objective(x, state.W, config);
        if (!std::isfinite(objective))
            throw NonFinite("solve: objective diverged at iteration " +
                            std::to_string(state.outer_iteration));
        state.objective_trace.push_back(objective);
        state.min_w_trace.push_back(state.W.minCoeff());

        if (progress)
            progress(state.outer_iteration, state.mu, state.feasibility_gap,
                     objective);

        const double scale =
            config.feas_scale_by_w
                ? std::max(1.0, state.W.cwiseAbs().maxCoeff())
                : 1.0;
        if (state.feasibility_gap <= config.feas_tolerance * scale) {
            converged = true;
            break;
        }
    }

    Mat final_w = config.final_w == FinalW::Z3 ? state.Z3
                                               : nonneg_project(state.W);
    final_w.diagonal().setZero();

    const auto t_end = std::chrono::steady_clock::now();
    return SolveReport{
        CoefficientMatrix(std::move(final_w)),
        converged,
        state.outer_iteration,
        state.feasibility_gap,
        std::move(state.objective_trace),
        std::move(state.min_w_trace),
        std::chrono::duration<double>(t_end - t_start).count(),
        config.seed,
    };
}

}  // namespace slimrank
