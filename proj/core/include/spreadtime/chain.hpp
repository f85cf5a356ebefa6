#ifndef SPREADTIME_CHAIN_HPP
#define SPREADTIME_CHAIN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spreadtime/model.hpp"

// Absorbing-chain construction for the SI spread process. The state is the
// vector of infected counts per group; infections only add nodes, so the
// generator restricted to transient states is strictly upper triangular
// (after sorting states by total count) and absorption at the completion
// target is a first-passage event.

namespace spreadtime {

// Infected count per group.
using StateVector = std::vector<int>;

// Smallest integer >= alpha * total, guarded against floating rounding of
// products like 0.9 * 100.
int alpha_target(int total_population, double alpha);

// Transient/absorbing partition of the truncated state space, ordered by
// (total count, lexicographic) so that every transition increases the
// ordinal. States below the seed floor are unreachable and excluded.
struct StateSpace {
    std::vector<StateVector> transient;
    std::vector<StateVector> absorbing;
    int alpha_count = 0; // completion target, ceil(alpha*N)

    std::size_t size() const { return transient.size(); }
    // Ordinal of a transient state, or nullopt if not present.
    std::optional<std::uint32_t> ordinal_of(const StateVector& state) const;
};

// Sparse row-compressed subgenerator over transient states. Each row holds
// the (negative) total outflow on the diagonal, at most K off-diagonal
// entries pointing at strictly larger ordinals, and the aggregated rate into
// the absorbing set.
struct Subgenerator {
    std::vector<double> diagonal;
    std::vector<std::uint32_t> row_offsets; // size dimension()+1
    std::vector<std::uint32_t> successors;
    std::vector<double> rates;
    std::vector<double> exit;

    std::size_t dimension() const { return diagonal.size(); }

    bool operator==(const Subgenerator&) const = default;
};

struct InitialDistribution {
    std::vector<double> weights; // over transient ordinals, sums to 1
};

struct BuiltChain {
    StateSpace space;
    Subgenerator subgen;
    InitialDistribution initial;
};

// Enumerates the truncated state space. Throws TrivialCompletion when the
// seeds already meet the target.
StateSpace enumerate_states(const std::vector<int>& sizes, const std::vector<int>& seeds,
                            double alpha);

// Rate of infecting one more node of to_group from the given state:
// (N_l - i_l) * sum_k i_k * rate(k,l). Rejects groups that are already full.
double transition_rate(const StateVector& from, std::size_t to_group, const NetworkSpec& spec);

// Builds the subgenerator and the initial distribution (all mass on the seed
// state). Throws TrivialCompletion or DegenerateReachability.
BuiltChain build_subgenerator(const NetworkSpec& spec, double alpha);

// Closed-form single-group birth chain: state i has outflow i*(N-i)*lambda.
// Structurally identical to build_subgenerator on the equivalent spec.
Subgenerator explicit_subgenerator_k1(int size, int seed_count, double lambda, double alpha);

// Debug/diff export: "row col rate" triplets (col == dimension denotes the
// aggregated exit column) plus a JSON header with dimension, alpha_count and
// state labels.
void export_triplets(const BuiltChain& chain, std::ostream& matrix_out, std::ostream& header_out);

} // namespace spreadtime

#endif
