#ifndef SPREADTIME_TEST_SUPPORT_HPP
#define SPREADTIME_TEST_SUPPORT_HPP

#include <random>

#include "spreadtime/chain.hpp"
#include "spreadtime/model.hpp"

namespace spreadtime::testing {

// Random valid spec with K in {1,2}, total population <= max_population,
// strictly positive rates, and seeds strictly below the full-alpha target.
inline NetworkSpec random_spec(std::mt19937_64& rng, int max_population = 30) {
    std::uniform_int_distribution<int> k_pick(1, 2);
    std::uniform_real_distribution<double> rate_pick(0.1, 5.0);
    const int k = k_pick(rng);

    NetworkSpec spec;
    spec.rates = RateMatrix(k);
    int remaining = max_population;
    for (int g = 0; g < k; ++g) {
        const int min_size = (g == k - 1) ? 2 : 1;
        std::uniform_int_distribution<int> size_pick(min_size,
                                                     std::max(min_size, remaining - (k - 1 - g)));
        const int size = size_pick(rng);
        remaining -= size;
        spec.groups.push_back(GroupProfile{size, 1.0, 1.0, 0});
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) spec.rates.at(a, b) = rate_pick(rng);

    // One guaranteed seed, extras at random, always leaving work to do.
    spec.groups[0].seeds = 1;
    std::uniform_int_distribution<int> extra_pick(0, spec.total_population() / 4);
    int extras = extra_pick(rng);
    for (int g = 0; g < k && extras > 0; ++g) {
        const int take = std::min(extras, spec.groups[g].size - spec.groups[g].seeds);
        spec.groups[g].seeds += take;
        extras -= take;
    }
    if (spec.total_seeds() >= spec.total_population())
        spec.groups[0].seeds = spec.groups[0].size - 1;
    return spec;
}

inline double random_alpha(std::mt19937_64& rng, const NetworkSpec& spec) {
    // Keep the target strictly above the seed count.
    const int n = spec.total_population();
    std::uniform_int_distribution<int> target_pick(spec.total_seeds() + 1, n);
    return static_cast<double>(target_pick(rng)) / n;
}

} // namespace spreadtime::testing

#endif
