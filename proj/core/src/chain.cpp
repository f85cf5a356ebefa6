#include "spreadtime/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

namespace spreadtime {

namespace {

int vector_sum(const StateVector& v) {
    return std::accumulate(v.begin(), v.end(), 0);
}

// Ordering used throughout: ascending total count, ties lexicographic.
bool state_less(const StateVector& a, const StateVector& b) {
    const int sa = vector_sum(a), sb = vector_sum(b);
    if (sa != sb) return sa < sb;
    return a < b;
}

} // namespace

int alpha_target(int total_population, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must be in (0,1]");
    // Quantities like 0.9*100 can land an ulp above the exact integer; the
    // slack is far below the 1/N spacing of attainable fractions.
    const int target = static_cast<int>(std::ceil(alpha * total_population - 1e-9));
    return std::max(target, 1);
}

std::optional<std::uint32_t> StateSpace::ordinal_of(const StateVector& state) const {
    const auto it = std::lower_bound(transient.begin(), transient.end(), state, state_less);
    if (it == transient.end() || *it != state) return std::nullopt;
    return static_cast<std::uint32_t>(it - transient.begin());
}

StateSpace enumerate_states(const std::vector<int>& sizes, const std::vector<int>& seeds,
                            double alpha) {
    if (sizes.size() != seeds.size() || sizes.empty())
        throw std::invalid_argument("enumerate_states: sizes/seeds shape mismatch");
    const std::size_t k = sizes.size();
    int total = 0, seed_total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (seeds[i] < 0 || seeds[i] > sizes[i])
            throw std::invalid_argument("enumerate_states: seeds out of range for group " +
                                        std::to_string(i));
        total += sizes[i];
        seed_total += seeds[i];
    }
    const int target = alpha_target(total, alpha);
    if (seed_total >= target)
        throw TrivialCompletion("seed count " + std::to_string(seed_total) +
                                " already meets target " + std::to_string(target));

    StateSpace space;
    space.alpha_count = target;

    // Odometer enumeration over the box [seeds, sizes], keeping |e| <= target.
    StateVector cur(seeds);
    while (true) {
        const int tot = vector_sum(cur);
        if (tot < target)
            space.transient.push_back(cur);
        else if (tot == target)
            space.absorbing.push_back(cur);
        std::size_t pos = 0;
        while (pos < k && cur[pos] == sizes[pos]) {
            cur[pos] = seeds[pos];
            ++pos;
        }
        if (pos == k) break;
        ++cur[pos];
    }
    std::sort(space.transient.begin(), space.transient.end(), state_less);
    std::sort(space.absorbing.begin(), space.absorbing.end(), state_less);
    return space;
}

double transition_rate(const StateVector& from, std::size_t to_group, const NetworkSpec& spec) {
    const std::size_t k = spec.group_count();
    if (from.size() != k) throw std::invalid_argument("transition_rate: state dimension mismatch");
    if (to_group >= k) throw std::invalid_argument("transition_rate: bad group index");
    const int room = spec.groups[to_group].size - from[to_group];
    if (room <= 0)
        throw std::invalid_argument("transition_rate: target group has no susceptible nodes");
    double pressure = 0.0;
    for (std::size_t g = 0; g < k; ++g) pressure += from[g] * spec.rates.at(g, to_group);
    return room * pressure;
}

BuiltChain build_subgenerator(const NetworkSpec& spec, double alpha) {
    require_valid(spec);
    const std::size_t k = spec.group_count();

    BuiltChain chain;
    chain.space = enumerate_states(spec.sizes(), spec.seed_counts(), alpha);
    const auto& states = chain.space.transient;
    const std::size_t n = states.size();
    const int target = chain.space.alpha_count;

    auto& sub = chain.subgen;
    sub.diagonal.assign(n, 0.0);
    sub.exit.assign(n, 0.0);
    sub.row_offsets.assign(n + 1, 0);
    sub.successors.reserve(n * k);
    sub.rates.reserve(n * k);

    StateVector succ;
    for (std::size_t i = 0; i < n; ++i) {
        const StateVector& e = states[i];
        const int tot = vector_sum(e);
        double outflow = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            if (e[l] == spec.groups[l].size) continue;
            double pressure = 0.0;
            for (std::size_t g = 0; g < k; ++g) pressure += e[g] * spec.rates.at(g, l);
            const double rate = (spec.groups[l].size - e[l]) * pressure;
            if (rate <= 0.0) continue;
            outflow += rate;
            if (tot + 1 == target) {
                sub.exit[i] += rate;
            } else {
                succ = e;
                ++succ[l];
                const auto ord = chain.space.ordinal_of(succ);
                if (!ord)
                    throw SpreadError("internal: successor state missing from enumeration");
                sub.successors.push_back(*ord);
                sub.rates.push_back(rate);
            }
        }
        if (outflow <= 0.0) {
            std::string label = "(";
            for (std::size_t g = 0; g < k; ++g)
                label += std::to_string(e[g]) + (g + 1 < k ? "," : ")");
            throw DegenerateReachability("transient state " + label + " has zero outflow");
        }
        sub.diagonal[i] = -outflow;
        sub.row_offsets[i + 1] = static_cast<std::uint32_t>(sub.successors.size());
    }

    chain.initial.weights.assign(n, 0.0);
    const auto seed_ord = chain.space.ordinal_of(spec.seed_counts());
    if (!seed_ord) throw SpreadError("internal: seed state missing from enumeration");
    chain.initial.weights[*seed_ord] = 1.0;
    return chain;
}

Subgenerator explicit_subgenerator_k1(int size, int seed_count, double lambda, double alpha) {
    if (size < 2) throw std::invalid_argument("explicit_subgenerator_k1: size must be >= 2");
    if (seed_count < 1 || seed_count > size)
        throw std::invalid_argument("explicit_subgenerator_k1: bad seed count");
    if (!(lambda > 0.0)) throw std::invalid_argument("explicit_subgenerator_k1: lambda must be > 0");
    const int target = alpha_target(size, alpha);
    if (seed_count >= target)
        throw TrivialCompletion("seed count " + std::to_string(seed_count) +
                                " already meets target " + std::to_string(target));

    Subgenerator sub;
    const int n = target - seed_count; // states seed_count .. target-1
    sub.diagonal.resize(n);
    sub.exit.assign(n, 0.0);
    sub.row_offsets.assign(n + 1, 0);
    for (int idx = 0; idx < n; ++idx) {
        const int i = seed_count + idx;
        // Same evaluation order as the generic builder, so results match
        // bit for bit.
        const double rate = (size - i) * (i * lambda);
        sub.diagonal[idx] = -rate;
        if (idx + 1 < n) {
            sub.successors.push_back(static_cast<std::uint32_t>(idx + 1));
            sub.rates.push_back(rate);
        } else {
            sub.exit[idx] = rate;
        }
        sub.row_offsets[idx + 1] = static_cast<std::uint32_t>(sub.successors.size());
    }
    return sub;
}

void export_triplets(const BuiltChain& chain, std::ostream& matrix_out, std::ostream& header_out) {
    const auto& sub = chain.subgen;
    const std::size_t n = sub.dimension();
    matrix_out.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        matrix_out << i << ' ' << i << ' ' << sub.diagonal[i] << '\n';
        for (std::uint32_t e = sub.row_offsets[i]; e < sub.row_offsets[i + 1]; ++e)
            matrix_out << i << ' ' << sub.successors[e] << ' ' << sub.rates[e] << '\n';
        if (sub.exit[i] > 0.0) matrix_out << i << ' ' << n << ' ' << sub.exit[i] << '\n';
    }

    nlohmann::json header;
    header["dimension"] = n;
    header["alpha_count"] = chain.space.alpha_count;
    header["transient_states"] = chain.space.transient;
    header["absorbing_states"] = chain.space.absorbing;
    header_out << header.dump(2) << '\n';
}

} // namespace spreadtime
