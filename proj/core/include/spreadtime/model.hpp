#ifndef SPREADTIME_MODEL_HPP
#define SPREADTIME_MODEL_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spreadtime/errors.hpp"

// Network specification for the SI spread process: node groups with
// per-group infectivity/susceptibility, a KxK rate matrix, and seed counts.
// All rates are per hour; all times are in hours.

namespace spreadtime {

struct GroupProfile {
    int size = 0;                 // number of nodes in the group
    double infectivity = 1.0;     // transmit probability per contact, in (0,1]
    double susceptibility = 1.0;  // receive probability per contact, in (0,1]
    int seeds = 0;                // nodes informed at time zero
};

// Square matrix of pairwise group meeting/infection rates, row = source
// group, column = target group.
class RateMatrix {
public:
    RateMatrix() = default;
    explicit RateMatrix(std::size_t dim, double value = 0.0)
        : dim_(dim), entries_(dim * dim, value) {}

    static RateMatrix constant(std::size_t dim, double value) {
        return RateMatrix(dim, value);
    }

    std::size_t dimension() const { return dim_; }
    double& at(std::size_t from, std::size_t to) { return entries_[from * dim_ + to]; }
    double at(std::size_t from, std::size_t to) const { return entries_[from * dim_ + to]; }
    const std::vector<double>& entries() const { return entries_; }

    bool operator==(const RateMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> entries_;
};

// Full input model. The rate matrix is consumed verbatim by the chain
// builder as the effective infection rates; if it holds raw meeting rates,
// apply effective_rates() first to fold in infectivity/susceptibility.
struct NetworkSpec {
    std::vector<GroupProfile> groups;
    RateMatrix rates;

    std::size_t group_count() const { return groups.size(); }
    int total_population() const;
    int total_seeds() const;
    std::vector<int> sizes() const;
    std::vector<int> seed_counts() const;
};

// Homogeneous (single group) spec with unit infectivity/susceptibility.
NetworkSpec homogeneous_spec(int size, double rate, int seeds);

// Infection rate of a single infected/susceptible pair: meeting rate thinned
// by the transmit and receive probabilities.
double effective_rate(double meeting_rate, double infectivity, double susceptibility);

// Applies effective_rate entrywise: entry (k,l) becomes
// rate(k,l) * infectivity(k) * susceptibility(l). Group profiles are kept
// for provenance but are not applied again downstream.
NetworkSpec effective_rates(const NetworkSpec& spec);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

// Reports every invariant violation, including "degenerate reachability":
// a group with uninformed nodes that no group can infect.
ValidationReport validate_spec(const NetworkSpec& spec);

// Throws ValidationError with the joined report if the spec is invalid.
void require_valid(const NetworkSpec& spec);

// Symmetric 2x2 rate matrix with intra/inter ratios gamma1, gamma2 whose
// population-average pairwise rate equals mean_rate. Requires equal group
// sizes.
RateMatrix fair_rate_matrix(double mean_rate, std::pair<int, int> sizes,
                            double gamma1, double gamma2);

// Average pairwise rate of a 2x2 matrix under the given group sizes; the
// quantity fair_rate_matrix holds fixed.
double average_pair_rate(const RateMatrix& rates, std::pair<int, int> sizes);

// One-parameter heterogeneous family: intra rates 2*gamma*m/(gamma+1) and
// 2*m/(gamma+1), inter rate m. The inter rate is the midpoint of the intra
// rates and the population average equals m for equal group sizes.
RateMatrix special_case_rates(double mean_rate, double gamma);

// JSON document {"groups":[...],"rates":[[..]],"rate_units":"per_hour"}.
std::string spec_to_json_string(const NetworkSpec& spec, int indent = -1);
NetworkSpec spec_from_json_string(std::string_view text);

} // namespace spreadtime

#endif
