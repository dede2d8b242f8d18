#include "desmooth/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace desmooth {

namespace {

double rss_at(const Dataset& data, double a, double g_a, double lambda) {
    double rss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = data.y(i) - g_a * std::exp(lambda * (data.x(i) - a));
        rss += r * r;
    }
    return rss;
}

} // namespace

double ExponentialFit::predict(double x, double a) const {
    return g_a * std::exp(lambda * (x - a));
}

LogLinearFit fit_loglinear(const Dataset& data) {
    if (data.size() < 2) {
        throw std::invalid_argument("fit_loglinear: need at least 2 observations");
    }
    const double a = data.interval().a;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!(data.y(i) > 0.0)) {
            throw NonpositiveResponseError(
                "fit_loglinear: response must be strictly positive (y = " +
                std::to_string(data.y(i)) + ")");
        }
        const double x = data.x(i) - a;
        const double ly = std::log(data.y(i));
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw DegenerateDesignError("fit_loglinear: all covariates coincide");
    }
    LogLinearFit fit;
    fit.lambda = (n * sxy - sx * sy) / denom;
    fit.log_g_a = (sy - fit.lambda * sx) / n;
    return fit;
}

ExponentialFit fit_exponential_nls(const Dataset& data, const NlsOptions& opts) {
    if (data.size() < 2) {
        throw std::invalid_argument("fit_exponential_nls: need at least 2 observations");
    }
    const double a = data.interval().a;
    if (data.xs().front() == data.xs().back()) {
        throw DegenerateDesignError("fit_exponential_nls: all covariates coincide");
    }

    double g_a, lambda;
    if (opts.init) {
        g_a = opts.init->first;
        lambda = opts.init->second;
    } else {
        const bool all_positive =
            std::all_of(data.ys().begin(), data.ys().end(), [](double y) { return y > 0.0; });
        if (all_positive) {
            const LogLinearFit ll = fit_loglinear(data);
            g_a = std::exp(ll.log_g_a);
            lambda = ll.lambda;
        } else {
            g_a = std::accumulate(data.ys().begin(), data.ys().end(), 0.0) /
                  static_cast<double>(data.size());
            lambda = 0.0;
        }
    }
    if (opts.fix_lambda) lambda = *opts.fix_lambda;

    ExponentialFit fit;
    fit.g_a = g_a;
    fit.lambda = lambda;
    fit.rss = rss_at(data, a, g_a, lambda);

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        // Gauss-Newton normal equations on the prediction Jacobian
        // d/d g_a = e_i, d/d lambda = g_a (x_i - a) e_i.
        double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
        double jtr0 = 0.0, jtr1 = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double dx = data.x(i) - a;
            const double e = std::exp(fit.lambda * dx);
            const double r = data.y(i) - fit.g_a * e;
            const double j0 = e;
            const double j1 = fit.g_a * dx * e;
            jtj00 += j0 * j0;
            jtj01 += j0 * j1;
            jtj11 += j1 * j1;
            jtr0 += j0 * r;
            jtr1 += j1 * r;
        }

        double step_g, step_l;
        if (opts.fix_lambda) {
            if (jtj00 == 0.0) break;
            step_g = jtr0 / jtj00;
            step_l = 0.0;
            if (std::abs(jtr0) < opts.grad_tol) {
                fit.converged = true;
                break;
            }
        } else {
            const double det = jtj00 * jtj11 - jtj01 * jtj01;
            if (std::hypot(jtr0, jtr1) < opts.grad_tol) {
                fit.converged = true;
                break;
            }
            if (det == 0.0 || !std::isfinite(det)) break;
            step_g = (jtj11 * jtr0 - jtj01 * jtr1) / det;
            step_l = (jtj00 * jtr1 - jtj01 * jtr0) / det;
        }

        // Step halving: accept only non-increasing RSS.
        double t = 1.0;
        double new_rss = fit.rss;
        double new_g = fit.g_a, new_l = fit.lambda;
        bool accepted = false;
        while (t >= 1e-14) {
            const double cand_g = fit.g_a + t * step_g;
            const double cand_l = fit.lambda + t * step_l;
            const double cand_rss = rss_at(data, a, cand_g, cand_l);
            if (std::isfinite(cand_rss) && cand_rss <= fit.rss) {
                new_rss = cand_rss;
                new_g = cand_g;
                new_l = cand_l;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        fit.iterations = iter;
        if (!accepted) break; // stuck; gradient test on the next loop decides convergence

        const double rel_change = (fit.rss - new_rss) / (fit.rss > 0.0 ? fit.rss : 1.0);
        fit.g_a = new_g;
        fit.lambda = new_l;
        fit.rss = new_rss;
        if (rel_change < opts.rss_rel_tol) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

} // namespace desmooth
