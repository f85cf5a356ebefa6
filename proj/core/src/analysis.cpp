#include "spreadtime/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spreadtime/errors.hpp"

namespace spreadtime {

namespace {

constexpr std::size_t kMaxSeriesSteps = 20'000'000;

// One uniformized jump: u <- u (I + F/rate). The exit column is dropped, so
// total mass shrinks by the absorbed fraction.
void apply_jump(const Subgenerator& sub, double rate, std::vector<double>& u,
                std::vector<double>& scratch) {
    const std::size_t n = sub.dimension();
    scratch.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ui = u[i];
        if (ui == 0.0) continue;
        scratch[i] += ui * (1.0 + sub.diagonal[i] / rate);
        for (std::uint32_t e = sub.row_offsets[i]; e < sub.row_offsets[i + 1]; ++e)
            scratch[sub.successors[e]] += ui * (sub.rates[e] / rate);
    }
    u.swap(scratch);
}

// Builds the sequence a_k = <u_k, w> for u_{k+1} = u_k P, truncated when the
// surviving mass drops below cutoff.
std::vector<double> jump_weighted_sequence(const Subgenerator& sub, double rate,
                                           std::vector<double> u, std::span<const double> w,
                                           double cutoff) {
    const std::size_t n = sub.dimension();
    std::vector<double> seq;
    std::vector<double> scratch(n);
    while (true) {
        double mass = 0.0, weighted = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass += u[i];
            weighted += u[i] * w[i];
        }
        seq.push_back(weighted);
        if (mass < cutoff) break;
        if (seq.size() > kMaxSeriesSteps)
            throw SpreadError("uniformization series did not converge");
        apply_jump(sub, rate, u, scratch);
    }
    return seq;
}

// Poisson(mu) mixture of seq[k], expanding a window outward from the mode
// until the captured Poisson mass exceeds 1 - tol. Entries past the end of
// seq are zero by construction.
double poisson_mixture(std::span<const double> seq, double mu, double tol) {
    if (mu <= 0.0) return seq.empty() ? 0.0 : seq[0];
    const std::size_t len = seq.size();
    // All usable Poisson mass lies beyond the truncated sequence.
    const double sd = std::sqrt(mu);
    if (mu - 12.0 * sd - 20.0 > static_cast<double>(len)) return 0.0;

    std::size_t mode = static_cast<std::size_t>(mu);
    if (mode >= len) mode = len - 1;
    const double m = static_cast<double>(mode);
    const double log_pm = -mu + m * std::log(mu) - std::lgamma(m + 1.0);
    const double pm = std::exp(log_pm);

    double total = pm * seq[mode];
    double captured = pm;
    double p_down = pm, p_up = pm;
    std::size_t lo = mode, hi = mode;
    bool down_open = mode > 0, up_open = true;
    while (captured < 1.0 - tol && (down_open || up_open)) {
        const double next_down = down_open ? p_down * (static_cast<double>(lo) / mu) : -1.0;
        const double next_up = up_open ? p_up * (mu / static_cast<double>(hi + 1)) : -1.0;
        if (next_down >= next_up) {
            p_down = next_down;
            --lo;
            total += p_down * seq[lo];
            captured += p_down;
            down_open = lo > 0;
        } else {
            ++hi;
            p_up = next_up;
            captured += p_up;
            if (hi < len) {
                total += p_up * seq[hi];
            } else if (p_up < tol * 1e-3) {
                // The tail beyond the sequence contributes nothing and its
                // Poisson mass has become negligible.
                up_open = false;
            }
        }
    }
    return total;
}

} // namespace

std::vector<double> backsolve_neg(const Subgenerator& sub, std::span<const double> b) {
    const std::size_t n = sub.dimension();
    if (b.size() != n) throw std::invalid_argument("backsolve_neg: size mismatch");
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::uint32_t e = sub.row_offsets[ii]; e < sub.row_offsets[ii + 1]; ++e)
            acc += sub.rates[e] * x[sub.successors[e]];
        x[ii] = acc / (-sub.diagonal[ii]);
    }
    return x;
}

SpreadDistribution::SpreadDistribution(InitialDistribution initial, Subgenerator subgen,
                                       double tolerance)
    : initial_(std::move(initial)), subgen_(std::move(subgen)), tolerance_(tolerance) {
    const std::size_t n = subgen_.dimension();
    if (n == 0) throw std::invalid_argument("SpreadDistribution: empty subgenerator");
    if (initial_.weights.size() != n)
        throw std::invalid_argument("SpreadDistribution: initial distribution size mismatch");
    if (!(tolerance_ > 0.0 && tolerance_ < 1e-2))
        throw std::invalid_argument("SpreadDistribution: tolerance out of range");
    double wsum = 0.0;
    for (double w : initial_.weights) {
        if (w < 0.0) throw std::invalid_argument("SpreadDistribution: negative initial weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("SpreadDistribution: initial weights must sum to 1");

    unif_rate_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(subgen_.diagonal[i] < 0.0))
            throw DegenerateReachability("state " + std::to_string(i) + " has zero outflow");
        unif_rate_ = std::max(unif_rate_, -subgen_.diagonal[i]);
    }

    const std::vector<double> ones(n, 1.0);
    mean_ = std::inner_product(initial_.weights.begin(), initial_.weights.end(),
                               backsolve_neg(subgen_, ones).begin(), 0.0);
    transient_mass_ = jump_weighted_sequence(subgen_, unif_rate_, initial_.weights, ones,
                                             tolerance_ * 1e-6);
}

SpreadDistribution SpreadDistribution::from_spec(const NetworkSpec& spec, double alpha,
                                                 double tolerance) {
    BuiltChain chain = build_subgenerator(spec, alpha);
    return SpreadDistribution(std::move(chain.initial), std::move(chain.subgen), tolerance);
}

double SpreadDistribution::survival(double t) const {
    if (t < 0.0) throw std::invalid_argument("survival: t must be >= 0");
    const double raw = poisson_mixture(transient_mass_, unif_rate_ * t, tolerance_);
    return std::min(1.0, std::max(0.0, raw));
}

double SpreadDistribution::cdf(double t) const { return 1.0 - survival(t); }

double SpreadDistribution::guaranteed_time(double beta) const {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("guaranteed_time: beta must be in (0,1)");
    double lo = 0.0;
    double hi = std::max(mean_, std::numeric_limits<double>::min());
    while (cdf(hi) < beta) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw SpreadError("guaranteed_time: bracketing diverged");
    }
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < beta)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double SpreadDistribution::moment(int order) const {
    if (order < 1) throw std::invalid_argument("moment: order must be >= 1");
    std::vector<double> x(subgen_.dimension(), 1.0);
    double factorial = 1.0;
    for (int k = 1; k <= order; ++k) {
        x = backsolve_neg(subgen_, x);
        factorial *= k;
    }
    return factorial * std::inner_product(initial_.weights.begin(), initial_.weights.end(),
                                          x.begin(), 0.0);
}

double SpreadDistribution::ratio(double beta) const { return guaranteed_time(beta) / mean_; }

double SpreadDistribution::decay_rate() const {
    double best = std::numeric_limits<double>::infinity();
    for (double d : subgen_.diagonal) best = std::min(best, -d);
    return best;
}

MeanInfectedCurve::MeanInfectedCurve(const NetworkSpec& spec, double tolerance)
    : tolerance_(tolerance) {
    require_valid(spec);
    population_ = spec.total_population();
    seed_total_ = spec.total_seeds();
    unif_rate_ = 1.0;
    if (seed_total_ >= population_) return; // M(t) is constant at N

    BuiltChain chain = build_subgenerator(spec, 1.0);
    const auto& sub = chain.subgen;
    unif_rate_ = 0.0;
    for (double d : sub.diagonal) unif_rate_ = std::max(unif_rate_, -d);

    // Weight each state by the number of still-susceptible nodes; then
    // M(t) = N - sum_e pi_t(e) * (N - |e|).
    std::vector<double> weights(sub.dimension());
    for (std::size_t i = 0; i < sub.dimension(); ++i) {
        const int infected = std::accumulate(chain.space.transient[i].begin(),
                                             chain.space.transient[i].end(), 0);
        weights[i] = static_cast<double>(population_ - infected);
    }
    weighted_mass_ = jump_weighted_sequence(sub, unif_rate_, chain.initial.weights, weights,
                                            tolerance * 1e-6);
}

double MeanInfectedCurve::value(double t) const {
    if (t < 0.0) throw std::invalid_argument("mean_infected: t must be >= 0");
    const double missing = poisson_mixture(weighted_mass_, unif_rate_ * t, tolerance_);
    return population_ - std::min(std::max(missing, 0.0),
                                  static_cast<double>(population_ - seed_total_));
}

double MeanInfectedCurve::derivative(double t) const {
    if (t < 0.0) throw std::invalid_argument("spread_speed: t must be >= 0");
    const double h = 1e-4 * std::max(t, 1.0);
    if (t >= h) return (value(t + h) - value(t - h)) / (2.0 * h);
    return (value(t + h) - value(t)) / h;
}

double mean_infected(const NetworkSpec& spec, double t) {
    return MeanInfectedCurve(spec).value(t);
}

std::vector<double> mean_infected(const NetworkSpec& spec, std::span<const double> ts) {
    MeanInfectedCurve curve(spec);
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(curve.value(t));
    return out;
}

double spread_speed(const NetworkSpec& spec, double t) {
    return MeanInfectedCurve(spec).derivative(t);
}

CompletionMetrics completion_metrics(const NetworkSpec& spec, double alpha, double beta) {
    try {
        const SpreadDistribution dist = SpreadDistribution::from_spec(spec, alpha);
        CompletionMetrics m;
        m.guaranteed_time = dist.guaranteed_time(beta);
        m.mean = dist.mean();
        m.ratio = m.guaranteed_time / m.mean;
        return m;
    } catch (const TrivialCompletion&) {
        return CompletionMetrics{0.0, 0.0, 1.0, true};
    }
}

namespace {

// Total seed count -> per-group placement following the priority order.
std::vector<int> place_seeds(const NetworkSpec& spec, int total,
                             std::span<const std::size_t> priority) {
    std::vector<std::size_t> order(priority.begin(), priority.end());
    if (order.empty()) order.push_back(0);
    std::vector<int> seeds(spec.group_count(), 0);
    int remaining = total;
    for (std::size_t g : order) {
        if (g >= spec.group_count())
            throw std::invalid_argument("min_seeds_for_bound: bad group index in priority");
        const int take = std::min(remaining, spec.groups[g].size);
        seeds[g] = take;
        remaining -= take;
        if (remaining == 0) break;
    }
    if (remaining > 0) throw std::invalid_argument("min_seeds_for_bound: seeds exceed population");
    return seeds;
}

} // namespace

int min_seeds_for_bound(const NetworkSpec& spec_template, double alpha, double beta,
                        double t_bound, std::span<const std::size_t> group_priority) {
    if (!(t_bound > 0.0))
        throw std::invalid_argument("min_seeds_for_bound: t_bound must be > 0");
    if (group_priority.empty() && spec_template.group_count() > 1)
        throw std::invalid_argument(
            "min_seeds_for_bound: multi-group specs need an explicit priority order");
    require_valid(spec_template);
    const int target = alpha_target(spec_template.total_population(), alpha);

    auto g_for = [&](int total_seeds) {
        NetworkSpec spec = spec_template;
        const auto seeds = place_seeds(spec_template, total_seeds, group_priority);
        for (std::size_t g = 0; g < spec.group_count(); ++g) spec.groups[g].seeds = seeds[g];
        return SpreadDistribution::from_spec(spec, alpha).guaranteed_time(beta);
    };

    const int max_seeds = target - 1;
    if (max_seeds < 1) throw TrivialCompletion("completion target is a single node");
    if (g_for(max_seeds) > t_bound)
        throw InfeasibleError("even " + std::to_string(max_seeds) +
                              " seeds exceed the time bound");
    if (g_for(1) <= t_bound) return 1;

    // G is non-increasing in the seed count under nested placement.
    int lo = 1, hi = max_seeds; // g(lo) > bound, g(hi) <= bound
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (g_for(mid) <= t_bound)
            hi = mid;
        else
            lo = mid;
    }
    // Monotonicity assertion at the boundary the search found.
    if (!(g_for(lo) > t_bound && g_for(hi) <= t_bound))
        throw SpreadError("min_seeds_for_bound: guaranteed time not monotone in seeds");
    return hi;
}

double rate_scale_for_bound(const SpreadDistribution& dist, double beta, double t_bound) {
    if (!(t_bound > 0.0))
        throw std::invalid_argument("rate_scale_for_bound: t_bound must be > 0");
    return dist.guaranteed_time(beta) / t_bound;
}

NetworkSpec scale_rates(const NetworkSpec& spec, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("scale_rates: gamma must be > 0");
    NetworkSpec out = spec;
    for (std::size_t i = 0; i < out.rates.dimension(); ++i)
        for (std::size_t j = 0; j < out.rates.dimension(); ++j) out.rates.at(i, j) *= gamma;
    return out;
}

} // namespace spreadtime
