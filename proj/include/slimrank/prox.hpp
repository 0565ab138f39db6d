#pragma once

#include "slimrank/types.hpp"

namespace slimrank {

/// Parameters of the smooth rank surrogate sum_i (1 - e^{-sigma_i/delta}).
struct RankSurrogateParams {
    double delta;   // approximation-accuracy control, > 0
    double beta;    // weight of the rank term, >= 0

    void validate() const;
};

/// f(sigma) = sum_i (1 - e^{-|sigma_i|/delta}); approaches rank as delta -> 0.
double rank_surrogate(const Vec& sigma, double delta);

/// Gradient of f on [0,inf): omega_i = (1/delta) e^{-sigma_i/delta}.
/// At sigma_i = 0 this is the one-sided derivative 1/delta exactly.
Vec surrogate_gradient(const Vec& sigma, double delta);

/// Numerical quadrature of the squared gap between the surrogate and the
/// unit step, integral_0^inf |(1 - e^{-s/delta}) - 1|^2 ds. Analytically
/// delta/2; computed here by composite Simpson as an independent route.
double surrogate_step_error(double delta);

/// Entrywise max(|q| - tau, 0) * sign(q); exact minimizer of
/// tau*||Z||_1 + 1/2 ||Z - Q||_F^2.
Mat soft_threshold(const Mat& q, double tau);

/// Entrywise max(a, 0); projection onto the nonnegative orthant.
Mat nonneg_project(const Mat& a);

struct DcResult {
    Vec sigma_star;                 // >= 0, non-increasing
    int inner_iterations = 0;
    double stationarity_residual = 0.0;
};

/// Minimizes beta*f(sigma) + mu/2 ||sigma - sigma_a||^2 over sigma >= 0 by
/// iterating the linearized update sigma <- (sigma_a - (beta/mu) omega)_+
/// componentwise, with a safeguarded Newton polish on the interior
/// stationarity equation once the iterate is near its fixed point. The
/// returned point satisfies
///   max_i |sigma*_i - (sigma_a_i - (beta/mu)(1/delta)e^{-sigma*_i/delta})_+|
///     <= dc_tolerance
/// and its objective never exceeds the objective at sigma_a.
/// Throws MaxInnerIterationsExceeded if the residual cannot be met.
DcResult dc_prox_scalar(const Vec& sigma_a, const RankSurrogateParams& params,
                        double mu, double dc_tolerance = 1e-8,
                        int max_inner = 100);

/// Proximal step of the matrix surrogate F(Z) = f(sigma(Z)): decompose
/// A = U diag(sigma_A) V^T, shrink the spectrum with dc_prox_scalar, and
/// recompose U diag(sigma*) V^T.
Mat rank_prox(const Mat& a, const RankSurrogateParams& params, double mu,
              double dc_tolerance = 1e-8, int max_inner = 100);

}  // namespace slimrank
