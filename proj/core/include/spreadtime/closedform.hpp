#ifndef SPREADTIME_CLOSEDFORM_HPP
#define SPREADTIME_CLOSEDFORM_HPP

#include <span>
#include <utility>

// Closed forms for the single-group birth chain and the non-cooperative
// baseline. These are independent of the matrix machinery and serve as
// oracles for it.

namespace spreadtime {

// Mean completion time of the birth chain: (1/lambda) * sum_{i=s}^{m-1}
// 1/(i(N-i)) with m = ceil(alpha*N). Returns 0 when the seeds already meet
// the target.
double homog_mean_completion(int size, int seeds, double lambda, double alpha);

// Variance, same chain: (1/lambda^2) * sum 1/(i(N-i))^2.
double homog_variance(int size, int seeds, double lambda, double alpha);

// CCDF of the sum of independent exponentials with rates eta*1..eta*n, equal
// in distribution to the max of n iid Exp(eta). The alternating binomial sum
// is used for small n and the exact product form 1-(1-e^{-eta z})^n beyond
// n=30, where the sum loses too many bits to cancellation.
double hypoexp_ccdf(int stages, double eta, double z);

// CCDF of a sum of exponentials with pairwise distinct rates via partial
// fractions. Throws NearDegenerateRates when two rates are closer than 1e-9
// relative; callers should fall back to the matrix method.
double generalized_erlang_ccdf(std::span<const double> rates, double z);

// Asymptotic bracket (lower, upper) for the guaranteed time of the full
// completion with one seed: upper = 4/(lambda*N) * (log(N-1) - log log(1/beta)),
// lower = upper/4. Holds for N beyond some threshold, not for all N.
std::pair<double, double> guaranteed_time_bounds(int size, double lambda, double beta);

// Non-cooperative model (only the seed transmits): harmonic mean
// (1/lambda) * sum_{i=1}^{N-1} 1/i, ...
double noncoop_mean(int size, double lambda);

// ... its CCDF 1-(1-e^{-lambda t})^{N-1}, ...
double noncoop_ccdf(int size, double lambda, double t);

// ... and its variance (1/lambda^2) * sum_{i=1}^{N-1} 1/i^2, which increases
// to zeta(2)/lambda^2.
double noncoop_variance(int size, double lambda);

// Moments of the limiting (N -> infinity) non-cooperative model diverge;
// this always throws InfiniteMoment. Finite-N statistics are available
// through noncoop_mean/noncoop_variance.
double noncoop_limit_moment(int order);

} // namespace spreadtime

#endif
