#include "spreadtime/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "spreadtime/chain.hpp"
#include "spreadtime/errors.hpp"

namespace spreadtime {

namespace rng {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    // 53-bit mantissa centered away from 0 and 1.
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::next_exponential(double rate) {
    return -std::log(next_unit()) / rate;
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer{seed ^ (0x9E3779B97F4A7C15ULL * (index + 1))};
    SplitMix64 out{mixer.next()};
    out.state ^= mixer.next();
    return out;
}

} // namespace rng

SampleSet::SampleSet(std::vector<double> samples, double alpha, std::string fingerprint)
    : samples_(std::move(samples)), alpha_(alpha), fingerprint_(std::move(fingerprint)) {}

const std::vector<double>& SampleSet::sorted() const {
    if (sorted_cache_.size() != samples_.size()) {
        sorted_cache_ = samples_;
        std::sort(sorted_cache_.begin(), sorted_cache_.end());
    }
    return sorted_cache_;
}

double SampleSet::mean() const {
    if (samples_.empty()) throw std::invalid_argument("SampleSet: empty");
    return std::accumulate(samples_.begin(), samples_.end(), 0.0) / samples_.size();
}

double SampleSet::variance() const {
    if (samples_.size() < 2) throw std::invalid_argument("SampleSet: need >= 2 samples");
    const double m = mean();
    double acc = 0.0;
    for (double x : samples_) acc += (x - m) * (x - m);
    return acc / (samples_.size() - 1);
}

namespace {

// FNV-1a over the spec JSON plus parameters, as a short reproducibility tag.
std::string fingerprint_of(const NetworkSpec& spec, double alpha, const SimConfig& config) {
    const std::string text = spec_to_json_string(spec) + "|a=" + std::to_string(alpha) +
                             "|m=" + std::to_string(static_cast<int>(config.model));
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void run_partitioned(std::uint64_t replications, unsigned threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& run_range) {
    if (threads <= 1) {
        run_range(0, replications);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (replications + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(replications, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([=] { run_range(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace

SampleSet simulate_completion(const NetworkSpec& spec, double alpha, const SimConfig& config) {
    require_valid(spec);
    if (config.replications < 1)
        throw std::invalid_argument("simulate_completion: replications must be >= 1");
    const std::size_t k = spec.group_count();
    const auto sizes = spec.sizes();
    const auto seeds = spec.seed_counts();
    const int target = alpha_target(spec.total_population(), alpha);
    const int seed_total = spec.total_seeds();
    if (seed_total >= target)
        throw TrivialCompletion("seed count already meets target");

    const bool coop = config.model == SpreadModel::cooperative;
    std::vector<double> samples(config.replications);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<int> counts(k);
        std::vector<double> group_rate(k);
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            auto stream = rng::substream(config.rng_seed, rep);
            counts.assign(seeds.begin(), seeds.end());
            int infected = seed_total;
            double clock = 0.0;
            while (infected < target) {
                double total = 0.0;
                for (std::size_t l = 0; l < k; ++l) {
                    double pressure = 0.0;
                    for (std::size_t g = 0; g < k; ++g) {
                        const double infectors = coop ? counts[g] : seeds[g];
                        pressure += infectors * spec.rates.at(g, l);
                    }
                    group_rate[l] = (sizes[l] - counts[l]) * pressure;
                    total += group_rate[l];
                }
                if (!(total > 0.0))
                    throw DegenerateReachability("simulation reached a state with zero outflow");
                clock += stream.next_exponential(total);
                double pick = stream.next_unit() * total;
                // Roundoff in the cumulative scan must never select a group
                // with zero rate, so fall back to the last positive one.
                std::size_t chosen = k;
                for (std::size_t l = 0; l < k; ++l) {
                    if (group_rate[l] <= 0.0) continue;
                    chosen = l;
                    if (pick < group_rate[l]) break;
                    pick -= group_rate[l];
                }
                ++counts[chosen];
                ++infected;
            }
            samples[rep] = clock;
        }
    };
    run_partitioned(config.replications, config.threads, run_range);
    return SampleSet(std::move(samples), alpha, fingerprint_of(spec, alpha, config));
}

SampleSet simulate_noncooperative(int size, double lambda, const SimConfig& config) {
    if (size < 2) throw std::invalid_argument("simulate_noncooperative: size must be >= 2");
    if (!(lambda > 0.0))
        throw std::invalid_argument("simulate_noncooperative: lambda must be > 0");
    if (config.replications < 1)
        throw std::invalid_argument("simulate_noncooperative: replications must be >= 1");

    std::vector<double> samples(config.replications);
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            auto stream = rng::substream(config.rng_seed, rep);
            double clock = 0.0;
            for (int i = 1; i < size; ++i)
                clock += stream.next_exponential((size - i) * lambda);
            samples[rep] = clock;
        }
    };
    run_partitioned(config.replications, config.threads, run_range);

    NetworkSpec tag = homogeneous_spec(size, lambda, 1);
    SimConfig cfg = config;
    cfg.model = SpreadModel::non_cooperative;
    return SampleSet(std::move(samples), 1.0, fingerprint_of(tag, 1.0, cfg));
}

double empirical_cdf(const SampleSet& samples, double t) {
    if (samples.size() == 0) throw std::invalid_argument("empirical_cdf: empty sample set");
    const auto& xs = samples.sorted();
    const auto it = std::upper_bound(xs.begin(), xs.end(), t);
    return static_cast<double>(it - xs.begin()) / xs.size();
}

double ks_distance(const SampleSet& samples, const std::function<double(double)>& cdf) {
    if (samples.size() == 0) throw std::invalid_argument("ks_distance: empty sample set");
    const auto& xs = samples.sorted();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // At a step of the empirical cdf the supremum candidates are the
        // step's top against F(x) and its bottom against the left limit
        // F(x-); the latter matters when F itself jumps there.
        d = std::max(d, std::abs((i + 1) / n - cdf(xs[i])));
        const double left = cdf(
            std::max(0.0, std::nextafter(xs[i], -std::numeric_limits<double>::infinity())));
        d = std::max(d, std::abs(left - i / n));
    }
    return d;
}

} // namespace spreadtime
