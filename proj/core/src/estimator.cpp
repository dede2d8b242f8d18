#include "desmooth/estimator.hpp"

#include <cmath>

namespace desmooth {

EstimatorSpec EstimatorSpec::parse(const std::string& name, std::optional<double> lambda) {
    EstimatorSpec spec;
    if (name == "nw" || name == "de1-0") {
        spec.method = Method::NW;
    } else if (name == "ll") {
        spec.method = Method::LL;
    } else if (name == "lq") {
        spec.method = Method::LQ;
    } else if (name == "lc") {
        spec.method = Method::LC;
    } else if (name == "nls") {
        spec.method = Method::Nls;
    } else if (name == "loglinear") {
        spec.method = Method::LogLinear;
    } else if (name.rfind("de1-", 0) == 0) {
        int k = 0;
        try {
            std::size_t pos = 0;
            k = std::stoi(name.substr(4), &pos);
            if (pos != name.size() - 4) throw std::invalid_argument(name);
        } catch (const std::exception&) {
            throw ConfigError("unknown estimator name: " + name);
        }
        if (k < 1 || k > kMaxTaylorDegree) {
            throw ConfigError("unknown estimator name: " + name + " (degree out of range)");
        }
        spec.method = Method::De1k;
        spec.degree = k;
        if (!lambda) {
            throw ConfigError("estimator " + name + " requires lambda");
        }
        spec.lambda = *lambda;
        return spec;
    } else {
        throw ConfigError("unknown estimator name: " + name);
    }
    if (lambda) spec.lambda = *lambda;
    return spec;
}

std::string EstimatorSpec::name() const {
    switch (method) {
    case Method::NW: return "nw";
    case Method::LL: return "ll";
    case Method::LQ: return "lq";
    case Method::LC: return "lc";
    case Method::De1k: return "de1-" + std::to_string(degree);
    case Method::Nls: return "nls";
    case Method::LogLinear: return "loglinear";
    }
    return "?";
}

int EstimatorSpec::poly_degree() const {
    switch (method) {
    case Method::NW: return 0;
    case Method::LL: return 1;
    case Method::LQ: return 2;
    case Method::LC: return 3;
    default:
        throw ConfigError("poly_degree: " + name() + " is not a local polynomial method");
    }
}

int EstimatorSpec::bandwidth_degree() const {
    switch (method) {
    case Method::NW: return 0;
    case Method::LL: return 1;
    case Method::De1k: return degree;
    default:
        throw ConfigError("no optimal-bandwidth degree defined for estimator " + name());
    }
}

Fit fit_estimator(const EstimatorSpec& spec, const Dataset& data, const Kernel& kernel, double h,
                  const std::vector<double>& grid) {
    switch (spec.method) {
    case Method::NW:
    case Method::LL:
    case Method::LQ:
    case Method::LC:
        return fit_local_poly(data, spec.poly_degree(), kernel, h, grid);
    case Method::De1k:
        return de1k_exponential(data, ExponentialDE{spec.lambda}, spec.degree, kernel, h, grid);
    default:
        throw ConfigError("fit_estimator: " + spec.name() + " is not a kernel method");
    }
}

namespace detail {

double estimator_loo(const EstimatorSpec& spec, const Dataset& data, const Kernel& kernel,
                     double h, double x0, std::size_t exclude) {
    switch (spec.method) {
    case Method::NW:
    case Method::LL:
    case Method::LQ:
    case Method::LC:
        return local_poly_loo(data, spec.poly_degree(), kernel, h, x0, exclude, nullptr);
    case Method::De1k:
        return de1k_exponential_loo(data, ExponentialDE{spec.lambda}, spec.degree, kernel, h, x0,
                                    exclude, nullptr);
    default:
        throw ConfigError("estimator_loo: " + spec.name() + " is not a kernel method");
    }
}

} // namespace detail

} // namespace desmooth
