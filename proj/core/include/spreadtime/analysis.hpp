#ifndef SPREADTIME_ANALYSIS_HPP
#define SPREADTIME_ANALYSIS_HPP

#include <span>
#include <vector>

#include "spreadtime/chain.hpp"
#include "spreadtime/model.hpp"

// Distribution of the completion time from (initial distribution,
// subgenerator): CDF/survival via uniformization, quantiles by bisection,
// moments by triangular solves, plus the planning inversions.

namespace spreadtime {

class SpreadDistribution {
public:
    // The series cutoff is precomputed at construction, so instances are
    // immutable afterwards and safe to share across threads.
    SpreadDistribution(InitialDistribution initial, Subgenerator subgen,
                       double tolerance = 1e-12);

    static SpreadDistribution from_spec(const NetworkSpec& spec, double alpha,
                                        double tolerance = 1e-12);

    // P{T <= t}, clamped to [0,1].
    double cdf(double t) const;

    // P{T > t} = h exp(F t) 1, evaluated as a Poisson mixture of the
    // uniformized jump chain.
    double survival(double t) const;

    // beta-quantile of T: unique root of cdf(t) = beta, bracketed by
    // doubling from the mean and bisected to 1e-9 relative.
    double guaranteed_time(double beta) const;

    // E[T^n] = n! h (-F)^{-n} 1 via n back substitutions.
    double moment(int order) const;
    double mean() const { return mean_; }

    // guaranteed_time(beta) / mean.
    double ratio(double beta) const;

    // Exponential tail rate: the smallest |diagonal| entry (the triangular
    // subgenerator's eigenvalues are its diagonal).
    double decay_rate() const;

    double uniformization_rate() const { return unif_rate_; }
    double tolerance() const { return tolerance_; }
    const Subgenerator& subgenerator() const { return subgen_; }
    const InitialDistribution& initial() const { return initial_; }

private:
    InitialDistribution initial_;
    Subgenerator subgen_;
    double tolerance_;
    double unif_rate_;
    double mean_;
    // transient_mass_[k] = probability of still being transient after k
    // uniformized jumps; non-increasing, truncated once below cutoff.
    std::vector<double> transient_mass_;
};

// Solve (-F) x = b by back substitution (exact sparsity, no fill-in).
std::vector<double> backsolve_neg(const Subgenerator& subgen, std::span<const double> b);

// Expected number of infected nodes over time, M(t) = sum_i P{T_{i/N} <= t},
// evaluated on the single full-completion chain.
class MeanInfectedCurve {
public:
    explicit MeanInfectedCurve(const NetworkSpec& spec, double tolerance = 1e-12);
    double value(double t) const;
    // dM/dt by central difference with step 1e-4*max(t,1); O(h^2) error,
    // one-sided at the left boundary.
    double derivative(double t) const;

private:
    double tolerance_;
    int population_;
    int seed_total_;
    double unif_rate_;
    std::vector<double> weighted_mass_; // sum_e u_k(e) * (N - |e|)
};

double mean_infected(const NetworkSpec& spec, double t);
std::vector<double> mean_infected(const NetworkSpec& spec, std::span<const double> ts);
double spread_speed(const NetworkSpec& spec, double t);

// Guaranteed time, mean and their ratio for a spec; trivial completion maps
// to {0, 0, 1}.
struct CompletionMetrics {
    double guaranteed_time = 0.0;
    double mean = 0.0;
    double ratio = 1.0;
    bool trivial = false;
};
CompletionMetrics completion_metrics(const NetworkSpec& spec, double alpha, double beta);

// Smallest total seed count whose guaranteed time meets t_bound. Seeds fill
// groups in the order of group_priority; multi-group specs must pass the
// order explicitly (there is no canonical placement). Throws
// InfeasibleError when even target-1 seeds are too slow.
int min_seeds_for_bound(const NetworkSpec& spec_template, double alpha, double beta,
                        double t_bound, std::span<const std::size_t> group_priority = {});

// Factor gamma such that scaling every rate by gamma hits t_bound exactly:
// gamma = guaranteed_time / t_bound (rate scaling scales time linearly).
double rate_scale_for_bound(const SpreadDistribution& dist, double beta, double t_bound);

// Same spec with every rate multiplied by gamma.
NetworkSpec scale_rates(const NetworkSpec& spec, double gamma);

} // namespace spreadtime

#endif
