#ifndef SPREADTIME_SIM_HPP
#define SPREADTIME_SIM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spreadtime/model.hpp"

// Event-driven Monte Carlo of the spread chain, the stochastic oracle for
// the matrix method. Replications draw from counter-derived substreams, so
// results are bit-identical for a given (spec, alpha, config) regardless of
// the worker count.

namespace spreadtime {

enum class SpreadModel {
    cooperative,     // every infected node transmits
    non_cooperative, // only the initial seeds transmit
};

struct SimConfig {
    std::uint64_t replications = 10'000;
    std::uint64_t rng_seed = 0;
    SpreadModel model = SpreadModel::cooperative;
    unsigned threads = 1;
};

class SampleSet {
public:
    SampleSet(std::vector<double> samples, double alpha, std::string fingerprint);

    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& sorted() const; // built on first use
    double alpha() const { return alpha_; }
    const std::string& fingerprint() const { return fingerprint_; }
    std::size_t size() const { return samples_.size(); }
    double mean() const;
    double variance() const; // unbiased

private:
    std::vector<double> samples_;
    double alpha_;
    std::string fingerprint_;
    mutable std::vector<double> sorted_cache_;
};

// Completion-time samples for reaching ceil(alpha*N) infected. Throws
// TrivialCompletion when the seeds already meet the target.
SampleSet simulate_completion(const NetworkSpec& spec, double alpha, const SimConfig& config);

// Single-group non-cooperative chain: the sojourn at i infected has rate
// (N-i)*lambda; samples the full completion time.
SampleSet simulate_noncooperative(int size, double lambda, const SimConfig& config);

// Fraction of samples <= t (right-continuous step function).
double empirical_cdf(const SampleSet& samples, double t);

// sup_t |empirical - analytic|, evaluated on both sides of every step.
double ks_distance(const SampleSet& samples, const std::function<double(double)>& cdf);

// Deterministic stream cipher used for replication substreams; exposed for
// the trace generator.
namespace rng {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next();
    double next_unit();                       // strictly inside (0,1)
    double next_exponential(double rate);     // inverse transform
};

// Substream for a (seed, index) pair; streams with distinct indices are
// decorrelated by two mixing rounds.
SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

} // namespace rng

} // namespace spreadtime

#endif
