#include "slimrank/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slimrank/errors.hpp"
#include "slimrank/matrix.hpp"

namespace slimrank {

void RankSurrogateParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("RankSurrogateParams: delta must be > 0");
    if (beta < 0.0 || !std::isfinite(beta))
        throw std::invalid_argument("RankSurrogateParams: beta must be >= 0");
}

double rank_surrogate(const Vec& sigma, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("rank_surrogate: delta must be > 0");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        sum += 1.0 - std::exp(-std::abs(sigma(i)) / delta);
    return sum;
}

Vec surrogate_gradient(const Vec& sigma, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("surrogate_gradient: delta must be > 0");
    Vec omega(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) < 0.0)
            throw std::invalid_argument(
                "surrogate_gradient: sigma must be componentwise >= 0");
        // at sigma_i = 0 this evaluates to the one-sided derivative 1/delta
        omega(i) = std::exp(-sigma(i) / delta) / delta;
    }
    return omega;
}

double surrogate_step_error(double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("surrogate_step_error: delta must be > 0");
    // integrand |(1 - e^{-s/delta}) - s(sigma)|^2 = e^{-2 sigma/delta} for
    // sigma > 0; truncate where the tail is below machine noise
    const double upper = 25.0 * delta;   // e^{-50} ~ 2e-22
    const int panels = 4096;             // composite Simpson, even count
    const double h = upper / panels;
    auto f = [delta](double s) {
        const double gap = std::exp(-s / delta);
        return gap * gap;
    };
    double sum = f(0.0) + f(upper);
    for (int i = 1; i < panels; ++i)
        sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

Mat soft_threshold(const Mat& q, double tau) {
    if (tau < 0.0)
        throw std::invalid_argument("soft_threshold: tau must be >= 0");
    return q.unaryExpr([tau](double v) {
        const double mag = std::abs(v) - tau;
        return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    });
}

Mat nonneg_project(const Mat& a) { return a.cwiseMax(0.0); }

namespace {

// Scalar objective h(s) = beta (1 - e^{-s/delta}) + mu/2 (s - a)^2.
inline double scalar_objective(double s, double a, double beta, double mu,
                               double delta) {
    const double d = s - a;
    return beta * (1.0 - std::exp(-s / delta)) + 0.5 * mu * d * d;
}

// One component of the spectral prox. The linearized update
//   s <- (a - (beta/mu)(1/delta) e^{-s/delta})_+
// started at s = a is monotone non-increasing and converges to the largest
// stationary point; Newton steps on the interior optimality equation
//   r(s) = s - a + (beta/(mu delta)) e^{-s/delta} = 0
// are layered on top to cut through the slow tail near tangency, accepted
// only when they stay in [0, s] and do not increase the objective.
struct ScalarProx {
    double a, beta, mu, delta;
    double shift;   // beta/(mu*delta)

    double map(double s) const {
        return std::max(a - shift * std::exp(-s / delta), 0.0);
    }

    // returns {sigma*, iterations, residual}; residual < 0 flags failure
    void run(double tol, int max_inner, double& out, int& iters,
             double& residual) const {
        double s = a;
        for (iters = 0; iters < max_inner; ++iters) {
            const double next = map(s);
            residual = std::abs(s - next);
            if (residual <= tol) {
                out = s;
                return;
            }
            s = next;
            if (s > 0.0) {
                const double e = std::exp(-s / delta);
                const double r = s - a + shift * e;
                const double dr = 1.0 - (shift / delta) * e;
                if (dr > 1e-12) {
                    const double cand = s - r / dr;
                    if (cand >= 0.0 && cand <= s &&
                        scalar_objective(cand, a, beta, mu, delta) <=
                            scalar_objective(s, a, beta, mu, delta))
                        s = cand;
                }
            }
        }
        const double next = map(s);
        residual = std::abs(s - next);
        out = s;
        if (residual > tol) residual = -residual;   // failure marker
    }
};

}  // namespace

DcResult dc_prox_scalar(const Vec& sigma_a, const RankSurrogateParams& params,
                        double mu, double dc_tolerance, int max_inner) {
    params.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("dc_prox_scalar: mu must be > 0");
    if (!(dc_tolerance > 0.0))
        throw std::invalid_argument("dc_prox_scalar: dc_tolerance must be > 0");
    for (Eigen::Index i = 0; i < sigma_a.size(); ++i) {
        if (sigma_a(i) < 0.0)
            throw std::invalid_argument(
                "dc_prox_scalar: sigma_a must be componentwise >= 0");
        if (i > 0 && sigma_a(i) > sigma_a(i - 1))
            throw std::invalid_argument(
                "dc_prox_scalar: sigma_a must be non-increasing");
    }

    DcResult res;
    res.sigma_star = Vec::Zero(sigma_a.size());
    if (sigma_a.size() == 0) return res;

    if (params.beta == 0.0) {   // pure quadratic: prox is the identity
        res.sigma_star = sigma_a;
        return res;
    }

    // values below 1e-12 * sigma_max are numerical zeros; skip their
    // exponentials
    const double floor = 1e-12 * sigma_a(0);

    const double shift = params.beta / (mu * params.delta);
    int worst_iters = 0;
    double worst_residual = 0.0;
    for (Eigen::Index i = 0; i < sigma_a.size(); ++i) {
        if (sigma_a(i) <= floor) {
            // residual of the clamped point: |0 - (sigma_a - shift)_+|
            const double r0 = std::max(sigma_a(i) - shift, 0.0);
            if (r0 <= dc_tolerance) {
                res.sigma_star(i) = 0.0;
                worst_residual = std::max(worst_residual, r0);
                continue;
            }
        }
        ScalarProx prox{sigma_a(i), params.beta, mu, params.delta, shift};
        double out = 0.0, residual = 0.0;
        int iters = 0;
        prox.run(dc_tolerance, max_inner, out, iters, residual);
        if (residual < 0.0)
            throw MaxInnerIterationsExceeded(
                "dc_prox_scalar: component " + std::to_string(i) +
                " still has residual " + std::to_string(-residual) + " after " +
                std::to_string(max_inner) + " iterations (delta too small?)");
        res.sigma_star(i) = out;
        worst_iters = std::max(worst_iters, iters);
        worst_residual = std::max(worst_residual, residual);
    }

    // the componentwise map is monotone in sigma_a, so order is preserved up
    // to round-off; clamp ties so the recomposed spectrum stays valid
    for (Eigen::Index i = 1; i < res.sigma_star.size(); ++i)
        res.sigma_star(i) = std::min(res.sigma_star(i), res.sigma_star(i - 1));

    res.inner_iterations = worst_iters;
    res.stationarity_residual = worst_residual;
    return res;
}

Mat rank_prox(const Mat& a, const RankSurrogateParams& params, double mu,
              double dc_tolerance, int max_inner) {
    params.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("rank_prox: mu must be > 0");
    if (a.rows() != a.cols())
        throw std::invalid_argument("rank_prox: A must be square");
    if (params.beta == 0.0) return a;

    SvdResult dec = svd(a);
    DcResult dc = dc_prox_scalar(dec.singular_values, params, mu, dc_tolerance,
                                 max_inner);
    return dec.left_vectors * dc.sigma_star.asDiagonal() *
           dec.right_vectors.transpose();
}

}  // namespace slimrank
