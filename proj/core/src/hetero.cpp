#include "spreadtime/hetero.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "spreadtime/analysis.hpp"
#include "spreadtime/chain.hpp"
#include "spreadtime/errors.hpp"

namespace spreadtime {

namespace {

void check_even_split(int total_size) {
    if (total_size < 2 || total_size % 2 != 0)
        throw std::invalid_argument("total size must be even and >= 2");
}

NetworkSpec two_group_spec(int half, const RateMatrix& rates) {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{half, 1.0, 1.0, 1}); // seed in group 1
    spec.groups.push_back(GroupProfile{half, 1.0, 1.0, 0});
    spec.rates = rates;
    return spec;
}

} // namespace

GammaGrid gamma_region(double mean_rate, int total_size, double alpha, double beta,
                       const GridSpec& grid) {
    check_even_split(total_size);
    if (grid.points < 2) throw std::invalid_argument("gamma_region: need at least 2 grid points");
    const int half = total_size / 2;

    GammaGrid out;
    out.gamma1_values.resize(grid.points);
    out.gamma2_values.resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double g = grid.gamma_max * static_cast<double>(i) / (grid.points - 1);
        out.gamma1_values[i] = g;
        out.gamma2_values[i] = g;
    }
    out.delta_g.assign(grid.points * grid.points, 0.0);
    out.member.assign(grid.points * grid.points, 0);

    out.homogeneous_g =
        SpreadDistribution::from_spec(homogeneous_spec(total_size, mean_rate, 1), alpha)
            .guaranteed_time(beta);
    const double tol = 1e-9 * out.homogeneous_g;

    auto run_cells = [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const double g1 = out.gamma1_values[c / grid.points];
            const double g2 = out.gamma2_values[c % grid.points];
            const auto rates = fair_rate_matrix(mean_rate, {half, half}, g1, g2);
            const double g_het =
                SpreadDistribution::from_spec(two_group_spec(half, rates), alpha)
                    .guaranteed_time(beta);
            out.delta_g[c] = g_het - out.homogeneous_g;
            out.member[c] = out.delta_g[c] < -tol ? 1 : 0;
        }
    };

    const std::size_t cells = out.delta_g.size();
    if (grid.threads <= 1) {
        run_cells(0, cells);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cells + grid.threads - 1) / grid.threads;
        for (unsigned w = 0; w < grid.threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(cells, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] { run_cells(begin, end); });
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

double threshold_gamma(int total_size) {
    if (total_size <= 4) throw std::invalid_argument("threshold_gamma: size must be > 4");
    return (5.0 * total_size - 16.0) / (total_size - 4.0);
}

namespace {

// Diagonal entry of the subgenerator at state (i1, i2): minus the total
// outflow under the one-parameter rate family.
double rho_at(int i1, int i2, int half, const RateMatrix& rates) {
    double out = 0.0;
    out += (half - i1) * (i1 * rates.at(0, 0) + i2 * rates.at(1, 0));
    out += (half - i2) * (i1 * rates.at(0, 1) + i2 * rates.at(1, 1));
    return -out;
}

// Integer vertices of {1 <= i1 <= n, 0 <= i2 <= n, i1 + i2 <= m}.
std::vector<std::pair<int, int>> polytope_vertices(int n, int m) {
    std::vector<std::pair<int, int>> verts;
    auto add = [&](int i1, int i2) {
        if (i1 < 1 || i1 > n || i2 < 0 || i2 > n || i1 + i2 > m) return;
        if (std::find(verts.begin(), verts.end(), std::make_pair(i1, i2)) == verts.end())
            verts.emplace_back(i1, i2);
    };
    add(1, 0);
    add(std::min(n, m), 0);
    add(1, std::min(n, m - 1));
    add(n, m - n);
    add(m - n, n);
    return verts;
}

} // namespace

VertexRho vertex_rho(int total_size, double mean_rate, double gamma, double alpha) {
    check_even_split(total_size);
    if (!(gamma >= 1.0)) throw std::invalid_argument("vertex_rho: gamma must be >= 1");
    const int half = total_size / 2;
    const int target = alpha_target(total_size, alpha);
    const int m = target - 1;
    if (m < 1) throw TrivialCompletion("completion target is a single node");
    const auto rates = special_case_rates(mean_rate, gamma);

    VertexRho out;
    out.corner = rho_at(1, 0, half, rates);
    if (m >= half) out.edge = rho_at(half, m - half, half, rates);
    return out;
}

double analytic_decay_rate(int total_size, double mean_rate, double gamma, double alpha) {
    check_even_split(total_size);
    if (!(gamma >= 1.0))
        throw std::invalid_argument("analytic_decay_rate: gamma must be >= 1");
    const int half = total_size / 2;
    const int target = alpha_target(total_size, alpha);
    const int m = target - 1;
    if (m < 1) throw TrivialCompletion("completion target is a single node");
    const auto rates = special_case_rates(mean_rate, gamma);

    // The diagonal is convex along every edge direction of the transient
    // polytope, so its maximum sits at a vertex; evaluating all candidate
    // vertices covers every case of the analytic table.
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [i1, i2] : polytope_vertices(half, m))
        best = std::max(best, rho_at(i1, i2, half, rates));
    return -best;
}

} // namespace spreadtime
