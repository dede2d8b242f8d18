#ifndef DESMOOTH_SIMULATION_HPP
#define DESMOOTH_SIMULATION_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/estimator.hpp"
#include "desmooth/fit.hpp"
#include "desmooth/kernel.hpp"
#include "desmooth/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace desmooth {

/// Covariate sampling scheme. Beta designs live on [0, 1]; the uniform
/// design uses its own interval. An optional gap removes every generated
/// point inside it (sample size shrinks), modeling zero-data stretches.
struct DesignSpec {
    enum class Kind { UniformRandom, BetaRandom, BetaQuantile };

    Kind kind = Kind::UniformRandom;
    Interval interval{0.0, 1.0}; ///< support (fixed to [0,1] for beta kinds)
    double alpha = 1.0;          ///< beta shape parameters
    double beta = 1.0;
    std::optional<Interval> gap;

    static DesignSpec uniform(double a = 0.0, double b = 1.0);
    static DesignSpec beta_random(double alpha, double beta);
    static DesignSpec beta_quantile(double alpha, double beta);
    DesignSpec with_gap(Interval g) const;

    /// Design density at x (gap-conditional when a gap is set).
    double density(double x) const;
    /// Derivative of the design density at x.
    double density_derivative(double x) const;
};

/// Additive noise distribution. Student-t and Laplace draws are used
/// unscaled.
struct NoiseSpec {
    enum class Kind { Normal, StudentT, Laplace };

    Kind kind = Kind::Normal;
    double sigma = 0.1;    ///< Normal standard deviation
    double nu = 4.0;       ///< Student-t degrees of freedom (> 2)
    double location = 0.0; ///< Laplace location
    double scale = 1.0;    ///< Laplace scale

    static NoiseSpec normal(double sigma);
    static NoiseSpec student_t(double nu);
    static NoiseSpec laplace(double location, double scale);

    double draw(RngStream& stream) const;
};

/// True mean function. The standard case is g(x) = g0 e^{lambda x}; a
/// custom g can be supplied for other truths while (g0, lambda) keep
/// parameterizing the DE-constrained estimators.
struct TruthSpec {
    double g0 = 1.0;
    double lambda = 1.0;
    std::function<double(double)> custom_g; ///< overrides the exponential when set

    double operator()(double x) const;
};

struct BandwidthPolicy {
    enum class Kind {
        LoocvPerReplication, ///< leave-one-out CV on the default grid, per method
        Fixed,               ///< one user-supplied h for every kernel method
        CorollaryOptimal,    ///< per-point asymptotically optimal h
    };

    Kind kind = Kind::LoocvPerReplication;
    double fixed_h = 0.0;

    static BandwidthPolicy loocv();
    static BandwidthPolicy fixed(double h);
    static BandwidthPolicy corollary_optimal();
};

struct SimConfig {
    TruthSpec truth{};
    DesignSpec design{};
    NoiseSpec noise{};
    int n = 30;
    int reps = 1000;
    std::vector<EstimatorSpec> methods;
    std::uint64_t seed = 1;
    BandwidthPolicy bandwidth{};
    Kernel kernel{};
    int max_threads = 0; ///< 0 = hardware concurrency
};

/// Per-method Monte-Carlo summary. counts are replications, never points.
struct MethodReport {
    std::string method;
    double mean_mad = 0.0;
    double se_mad = 0.0;              ///< sample sd of mads / sqrt(len(mads))
    std::vector<double> mads;         ///< one MAD per replication that produced one
    int degenerate_reps = 0;          ///< replications with any degenerate point or failed fit
    int nonconverged_reps = 0;        ///< NLS replications that hit the iteration cap
};

struct SimReport {
    std::vector<MethodReport> methods;
    std::uint64_t seed = 0;
    int n = 0;
    int reps = 0;
    std::string config_echo; ///< human-readable restatement of the run config
};

/// Draws one dataset: covariates per the design (quantile designs place
/// x_i at the i/(n+1) quantiles), responses truth(x) + noise. Gap points
/// are removed after generation. Throws EmptyDatasetError when nothing
/// survives.
Dataset generate_dataset(const DesignSpec& design, const TruthSpec& truth, const NoiseSpec& noise,
                         int n, RngStream& stream);

struct MadResult {
    double value = 0.0;
    int excluded = 0; ///< degenerate pairs left out
};

/// Median absolute deviation between truth and fit, skipping degenerate
/// (NaN) fitted values pairwise. Even counts average the middle two.
/// Throws UndefinedMadError when every point is degenerate.
MadResult mad(const std::vector<double>& true_values, const std::vector<double>& fitted);

/// Replicated MAD study: per replication, generate data, pick bandwidths
/// per policy, fit every method at the design points, and score MAD against
/// the truth. Failures are counted per replication, never propagated.
/// Reports are bit-identical for a given config regardless of thread count.
SimReport run_mad_study(const SimConfig& config);

/// Pointwise log mean-squared-error curves over an evaluation grid.
struct MseCurves {
    std::vector<double> grid;
    std::vector<std::string> methods;
    std::vector<std::vector<double>> log_mse;  ///< [method][grid point]
    std::vector<std::vector<int>> valid_reps;  ///< replications contributing per point
};

MseCurves run_mse_curve(const SimConfig& config, const std::vector<double>& eval_grid);

/// Finite-sample conditional-variance ratio study: draws a uniform random
/// design on [0, 1], and at every design point computes the ratio of the
/// exact conditional variance factor of the degree-1 DE-constrained
/// estimator to that of the local constant estimator under a Gaussian
/// kernel (the error variance cancels).
struct VarianceRatioStudy {
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

/// Bandwidth defaults to kVarianceRatioBandwidth.
VarianceRatioStudy variance_ratio_study(int n, double lambda, std::uint64_t seed,
                                        std::optional<double> h = {});

/// Default bandwidth of the ratio study, sized so a size-10 uniform design
/// produces per-point ratios spread over roughly (0.90, 1.10) with mean
/// near 1.
inline constexpr double kVarianceRatioBandwidth = 0.065;

} // namespace desmooth

#endif // DESMOOTH_SIMULATION_HPP
