#ifndef SPREADTIME_HETERO_HPP
#define SPREADTIME_HETERO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spreadtime/model.hpp"

// Dual-community (K=2) heterogeneity analysis: where does splitting a
// population into two groups with ratios (gamma1, gamma2) beat the
// homogeneous network with the same average rate, and what is the exact
// exponential decay rate of the completion-time tail.

namespace spreadtime {

struct GridSpec {
    double gamma_max = 20.0;
    std::size_t points = 41; // per axis, from 0 to gamma_max inclusive
    unsigned threads = 1;
};

struct GammaGrid {
    std::vector<double> gamma1_values;
    std::vector<double> gamma2_values;
    // Row-major [i1 * gamma2_values.size() + i2].
    std::vector<double> delta_g;      // heterogeneous G minus homogeneous G
    std::vector<std::uint8_t> member; // 1 iff strictly faster beyond tolerance
    double homogeneous_g = 0.0;

    std::size_t cell(std::size_t i1, std::size_t i2) const {
        return i1 * gamma2_values.size() + i2;
    }
};

// Sweeps (gamma1, gamma2) over the grid: each cell builds the
// constraint-fair rate matrix, computes the guaranteed time with one seed in
// group 1, and compares against the homogeneous network. Membership requires
// improvement beyond 1e-9 relative, so the homogeneous point (1,1) is
// boundary-neutral.
GammaGrid gamma_region(double mean_rate, int total_size, double alpha, double beta,
                       const GridSpec& grid = {});

// Ratio threshold (5N-16)/(N-4) where the decay-rate derivative changes sign
// for intermediate completion targets.
double threshold_gamma(int total_size);

// Diagonal entries of the subgenerator at the two candidate maximizer
// vertices: the near-seed corner (1,0) and the absorbing-edge vertex
// (N/2, target-1-N/2); the latter exists only when target-1 >= N/2.
struct VertexRho {
    double corner = 0.0;
    std::optional<double> edge;
};
VertexRho vertex_rho(int total_size, double mean_rate, double gamma, double alpha);

// Analytic decay rate for the special one-parameter family: the largest
// diagonal entry over the transient polytope is attained at one of its
// vertices; returns minus that maximum.
double analytic_decay_rate(int total_size, double mean_rate, double gamma, double alpha);

} // namespace spreadtime

#endif
