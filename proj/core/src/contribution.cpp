#include "spreadtime/contribution.hpp"

#include "spreadtime/analysis.hpp"
#include "spreadtime/chain.hpp"
#include "spreadtime/errors.hpp"

namespace spreadtime {

double node_contribution(const NetworkSpec& spec, std::size_t removed_group, double alpha,
                         double beta, const ContributionOptions& options) {
    require_valid(spec);
    if (removed_group >= spec.group_count())
        throw std::invalid_argument("node_contribution: bad group index");
    const int population = spec.total_population();
    if (population < 3)
        throw ValidationError("node_contribution: need at least 3 nodes");

    NetworkSpec reduced = spec;
    auto& group = reduced.groups[removed_group];
    if (options.remove_seed) {
        if (group.seeds < 1)
            throw ValidationError("node_contribution: group has no seed to remove");
        --group.seeds;
    } else if (group.seeds >= group.size) {
        throw ValidationError("node_contribution: every node in the group is a seed");
    }
    --group.size;
    require_valid(reduced);

    // Both terms target the same absolute infected count.
    const double alpha_full = alpha * (population - 1) / population;
    const int target_reduced = alpha_target(population - 1, alpha);
    const int target_full = alpha_target(population, alpha_full);
    if (target_reduced != target_full)
        throw SpreadError("node_contribution: target mismatch between terms");

    const double without_node =
        SpreadDistribution::from_spec(reduced, alpha).guaranteed_time(beta);
    const double with_node =
        SpreadDistribution::from_spec(spec, alpha_full).guaranteed_time(beta);
    return without_node / with_node;
}

std::vector<double> group_contributions(const NetworkSpec& spec, double alpha, double beta,
                                        const ContributionOptions& options) {
    std::vector<double> out;
    out.reserve(spec.group_count());
    for (std::size_t g = 0; g < spec.group_count(); ++g)
        out.push_back(node_contribution(spec, g, alpha, beta, options));
    return out;
}

} // namespace spreadtime
