#include "spreadtime/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spreadtime/chain.hpp"
#include "spreadtime/errors.hpp"

namespace spreadtime {

namespace {

void check_birth_args(int size, int seeds, double lambda, double alpha) {
    if (size < 2) throw std::invalid_argument("size must be >= 2");
    if (seeds < 1 || seeds > size) throw std::invalid_argument("seeds must be in [1,size]");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
}

double clamp_unit(double p) { return std::min(1.0, std::max(0.0, p)); }

} // namespace

double homog_mean_completion(int size, int seeds, double lambda, double alpha) {
    check_birth_args(size, seeds, lambda, alpha);
    const int target = alpha_target(size, alpha);
    if (seeds >= target) return 0.0;
    double sum = 0.0;
    for (int i = seeds; i < target; ++i)
        sum += 1.0 / (static_cast<double>(i) * (size - i));
    return sum / lambda;
}

double homog_variance(int size, int seeds, double lambda, double alpha) {
    check_birth_args(size, seeds, lambda, alpha);
    const int target = alpha_target(size, alpha);
    if (seeds >= target) return 0.0;
    double sum = 0.0;
    for (int i = seeds; i < target; ++i) {
        const double r = static_cast<double>(i) * (size - i);
        sum += 1.0 / (r * r);
    }
    return sum / (lambda * lambda);
}

double hypoexp_ccdf(int stages, double eta, double z) {
    if (stages < 1) throw std::invalid_argument("hypoexp_ccdf: stages must be >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("hypoexp_ccdf: eta must be > 0");
    if (z < 0.0) throw std::invalid_argument("hypoexp_ccdf: z must be >= 0");
    if (stages > 30) return clamp_unit(-std::expm1(stages * std::log1p(-std::exp(-eta * z))));
    double sum = 0.0;
    double binom = 1.0; // C(stages, i), built incrementally
    for (int i = 1; i <= stages; ++i) {
        binom *= static_cast<double>(stages - i + 1) / i;
        const double term = binom * std::exp(-eta * i * z);
        sum += (i % 2 == 1) ? term : -term;
    }
    return clamp_unit(sum);
}

double generalized_erlang_ccdf(std::span<const double> rates, double z) {
    if (rates.empty()) throw std::invalid_argument("generalized_erlang_ccdf: no rates");
    if (z < 0.0) throw std::invalid_argument("generalized_erlang_ccdf: z must be >= 0");
    for (double r : rates)
        if (!(r > 0.0)) throw std::invalid_argument("generalized_erlang_ccdf: rates must be > 0");

    const std::size_t n = rates.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = std::abs(rates[i] - rates[j]);
            if (gap <= 1e-9 * std::max(rates[i], rates[j]))
                throw NearDegenerateRates("rates " + std::to_string(rates[i]) + " and " +
                                          std::to_string(rates[j]) +
                                          " are too close for partial fractions");
        }

    double sum = 0.0;
    double magnitude = 0.0; // bounds the rounding error of the cancelling sum
    for (std::size_t i = 0; i < n; ++i) {
        double coeff = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) coeff *= rates[j] / (rates[j] - rates[i]);
        const double term = coeff * std::exp(-rates[i] * z);
        sum += term;
        magnitude += std::abs(term);
    }
    if (magnitude * 2.3e-16 > 1e-10)
        throw NearDegenerateRates(
            "partial fractions are too ill-conditioned here (error bound " +
            std::to_string(magnitude * 2.3e-16) + "); use the matrix method");
    return clamp_unit(sum);
}

std::pair<double, double> guaranteed_time_bounds(int size, double lambda, double beta) {
    if (size < 3) throw std::invalid_argument("guaranteed_time_bounds: size must be >= 3");
    if (!(lambda > 0.0)) throw std::invalid_argument("guaranteed_time_bounds: lambda must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("guaranteed_time_bounds: beta must be in (0,1)");
    const double upper =
        4.0 / (lambda * size) * (std::log(size - 1.0) - std::log(std::log(1.0 / beta)));
    return {upper / 4.0, upper};
}

double noncoop_mean(int size, double lambda) {
    if (size < 2) throw std::invalid_argument("noncoop_mean: size must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("noncoop_mean: lambda must be > 0");
    double sum = 0.0;
    for (int i = 1; i < size; ++i) sum += 1.0 / i;
    return sum / lambda;
}

double noncoop_ccdf(int size, double lambda, double t) {
    if (size < 2) throw std::invalid_argument("noncoop_ccdf: size must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("noncoop_ccdf: lambda must be > 0");
    if (t < 0.0) throw std::invalid_argument("noncoop_ccdf: t must be >= 0");
    return clamp_unit(-std::expm1((size - 1) * std::log1p(-std::exp(-lambda * t))));
}

double noncoop_variance(int size, double lambda) {
    if (size < 2) throw std::invalid_argument("noncoop_variance: size must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("noncoop_variance: lambda must be > 0");
    double sum = 0.0;
    for (int i = 1; i < size; ++i) sum += 1.0 / (static_cast<double>(i) * i);
    return sum / (lambda * lambda);
}

double noncoop_limit_moment(int order) {
    if (order < 1) throw std::invalid_argument("noncoop_limit_moment: order must be >= 1");
    throw InfiniteMoment("moments of the limiting non-cooperative completion time diverge");
}

} // namespace spreadtime
