#include "desmooth/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace desmooth {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double de1k_bias(int k, const AsymptoticContext& ctx) {
    if (k < 0) {
        throw std::invalid_argument("de1k_bias: degree must be nonnegative");
    }
    const double lead = std::pow(ctx.lambda, k + 1) * ctx.g_x0 / factorial(k + 1);
    if (k % 2 == 1) {
        return lead * std::pow(ctx.h, k + 1) * ctx.kernel.moment(k + 1);
    }
    const double drift = ctx.lambda / (k + 2.0) + ctx.fprime_x0 / ctx.f_x0;
    return lead * std::pow(ctx.h, k + 2) * ctx.kernel.moment(k + 2) * drift;
}

double de1k_variance(const AsymptoticContext& ctx) {
    if (!(ctx.h > 0.0) || !(ctx.n >= 1.0) || !(ctx.f_x0 > 0.0)) {
        throw std::invalid_argument("de1k_variance: need h > 0, n >= 1, f(x0) > 0");
    }
    return ctx.sigma2 * ctx.kernel.roughness(0) / (ctx.n * ctx.h * ctx.f_x0);
}

BiasVariance baseline_bias_variance(Method method, const AsymptoticContext& ctx) {
    const double g = ctx.g_x0;
    const double l = ctx.lambda;
    const double h2 = ctx.h * ctx.h;
    const double fp_over_f = ctx.fprime_x0 / ctx.f_x0;
    const double mu2 = ctx.kernel.moment(2);
    const double mu4 = ctx.kernel.moment(4);
    const double mu6 = ctx.kernel.moment(6);
    const double v0 = ctx.kernel.roughness(0);
    const double v2 = ctx.kernel.roughness(2);
    const double v4 = ctx.kernel.roughness(4);
    const double base_var = ctx.sigma2 / (ctx.n * ctx.h * ctx.f_x0);

    switch (method) {
    case Method::NW:
        return {0.5 * (l * l * g + 2.0 * l * g * fp_over_f) * h2 * mu2, base_var * v0};
    case Method::LL:
        return {0.5 * l * l * g * h2 * mu2, base_var * v0};
    case Method::LQ:
    case Method::LC: {
        const double shape = (mu2 * mu6 - mu4 * mu4) / (mu2 * mu2 - mu4);
        const double l3 = l * l * l;
        double bias = shape * l3 * l * g * h2 * h2 / 24.0;
        if (method == Method::LQ) {
            bias = shape * (l3 * l * g + 4.0 * l3 * g * fp_over_f) * h2 * h2 / 24.0;
        }
        const double denom = (mu2 * mu2 - mu4) * (mu2 * mu2 - mu4);
        const double var = base_var * (mu4 * mu4 * v0 - 2.0 * mu2 * mu4 * v2 + mu2 * mu2 * v4) /
                           denom;
        return {bias, var};
    }
    default:
        throw std::invalid_argument(
            "baseline_bias_variance: only NW, LL, LQ, LC are tabulated");
    }
}

double amse(int k, const AsymptoticContext& ctx) {
    const double b = de1k_bias(k, ctx);
    return b * b + de1k_variance(ctx);
}

} // namespace desmooth
