#ifndef SPREADTIME_CONTRIBUTION_HPP
#define SPREADTIME_CONTRIBUTION_HPP

#include <cstddef>
#include <vector>

#include "spreadtime/model.hpp"

// Single-removal contribution of a node to the spread: the guaranteed time
// without the node over the guaranteed time with it, both targeting the same
// absolute number of infected nodes. Nodes within a group are exchangeable,
// so contributions are per group.

namespace spreadtime {

struct ContributionOptions {
    // Removing a seed also removes its seed mass; by default a non-seed node
    // is removed.
    bool remove_seed = false;
};

// C = G(network without one node of the group, alpha) /
//     G(full network, alpha*(N-1)/N); values above 1 mean the node
// accelerates the spread.
double node_contribution(const NetworkSpec& spec, std::size_t removed_group, double alpha,
                         double beta, const ContributionOptions& options = {});

// node_contribution for every group.
std::vector<double> group_contributions(const NetworkSpec& spec, double alpha, double beta,
                                        const ContributionOptions& options = {});

} // namespace spreadtime

#endif
