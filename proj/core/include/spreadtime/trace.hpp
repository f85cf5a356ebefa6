#ifndef SPREADTIME_TRACE_HPP
#define SPREADTIME_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spreadtime/model.hpp"

// Contact-trace ingestion and rate estimation: pairwise contact counts over
// a horizon give maximum-likelihood meeting rates, contact durations and
// neighbor counts give the susceptibility, and a Poisson generator produces
// synthetic traces for closing the estimation loop. Trace timestamps are in
// seconds; estimated rates are per hour.

namespace spreadtime {

struct ContactRecord {
    std::string node_a;
    std::string node_b;
    double start_s = 0.0;
    double end_s = 0.0;
};

// Unordered pair key, stored with the lexicographically smaller node first.
using PairKey = std::pair<std::string, std::string>;
PairKey make_pair_key(const std::string& a, const std::string& b);

struct TraceFormat {
    char delimiter = ',';
    bool expect_header = true;
};

struct TraceParseResult {
    std::vector<ContactRecord> records; // sorted by start time
    std::vector<std::string> warnings;  // e.g. merged overlapping duplicates
};

// CSV with header node_a,node_b,start_s,end_s; '#' starts a comment line.
// Throws TraceParseError with the offending line number. Overlapping
// intervals of the same pair are merged with a warning.
TraceParseResult parse_trace(std::istream& in, const TraceFormat& format = {});
void write_trace(std::ostream& out, std::span<const ContactRecord> records);

struct TraceStats {
    std::map<std::string, std::size_t> contact_counts; // per node
    double avg_neighbors = 0.0; // event-weighted simultaneous partners
    std::vector<double> durations_sorted;
    std::map<PairKey, double> pair_intercontact_mean_s;

    // Fraction of contact durations >= d.
    double duration_ccdf(double d) const;
};

TraceStats compute_stats(std::span<const ContactRecord> records);

// Maximum-likelihood pairwise rate: contacts/horizon, per hour. Pairs absent
// from the map have rate zero.
std::map<PairKey, double> pairwise_rates(std::span<const ContactRecord> records,
                                         double horizon_s);

// Group rate = mean pairwise rate over ordered pairs between the groups
// (zero-contact pairs included in the mean).
RateMatrix group_rate_matrix(std::span<const ContactRecord> records,
                             const std::map<std::string, int>& grouping, double horizon_s);

// Success probability of one contact is the chance its duration covers the
// transfer; with geometric retries the expected contacts per success is 1/p,
// and psi = p / avg_neighbors, clamped to (0,1]. Throws NoFeasibleTransfer
// when no contact is long enough.
double susceptibility_estimate(const TraceStats& stats, double transfer_time_s);

struct IntercontactStats {
    double mean_gap_s = 0.0;
    double cv = 0.0; // ~1 under the exponential model
    std::size_t gap_count = 0;
};

// Gaps between consecutive contact starts of one pair; needs >= 2 contacts.
IntercontactStats intercontact_stats(std::span<const ContactRecord> records,
                                     const PairKey& pair);

struct DurationModel {
    enum class Kind { exponential, fixed };
    Kind kind = Kind::exponential;
    double mean_s = 600.0;
};

// Synthetic trace: per node pair an independent Poisson contact process at
// the group-pair base rate, contact starts uniform over the horizon,
// durations from the model. Deterministic for a given seed.
std::vector<ContactRecord> generate_trace(const NetworkSpec& base_spec, double horizon_s,
                                          const DurationModel& durations, std::uint64_t seed);

// Node naming used by generate_trace: groups laid out consecutively.
std::vector<std::string> node_names(const NetworkSpec& spec);
std::map<std::string, int> default_grouping(const NetworkSpec& spec);

// Grouping CSV: header node,group.
std::map<std::string, int> parse_grouping(std::istream& in);
void write_grouping(std::ostream& out, const std::map<std::string, int>& grouping);

} // namespace spreadtime

#endif
