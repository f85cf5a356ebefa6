#include "spreadtime/trace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "spreadtime/errors.hpp"
#include "spreadtime/sim.hpp"

namespace spreadtime {

PairKey make_pair_key(const std::string& a, const std::string& b) {
    return a <= b ? PairKey{a, b} : PairKey{b, a};
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

double parse_double(const std::string& text, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw TraceParseError(line_no, std::string("bad ") + what + " value '" + text + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

TraceParseResult parse_trace(std::istream& in, const TraceFormat& format) {
    TraceParseResult result;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = !format.expect_header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const auto fields = split_fields(text, format.delimiter);
        if (fields.size() != 4)
            throw TraceParseError(line_no, "expected 4 fields, got " +
                                               std::to_string(fields.size()));
        ContactRecord rec;
        rec.node_a = trim(fields[0]);
        rec.node_b = trim(fields[1]);
        rec.start_s = parse_double(trim(fields[2]), line_no, "start_s");
        rec.end_s = parse_double(trim(fields[3]), line_no, "end_s");
        if (rec.node_a.empty() || rec.node_b.empty())
            throw TraceParseError(line_no, "empty node identifier");
        if (rec.node_a == rec.node_b)
            throw TraceParseError(line_no, "self-contact " + rec.node_a);
        if (rec.end_s < rec.start_s) throw TraceParseError(line_no, "end before start");
        result.records.push_back(std::move(rec));
    }

    // Merge overlapping intervals of the same pair.
    std::map<PairKey, std::vector<std::size_t>> by_pair;
    for (std::size_t i = 0; i < result.records.size(); ++i)
        by_pair[make_pair_key(result.records[i].node_a, result.records[i].node_b)].push_back(i);
    std::vector<ContactRecord> merged;
    merged.reserve(result.records.size());
    for (auto& [key, idxs] : by_pair) {
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            return result.records[a].start_s < result.records[b].start_s;
        });
        ContactRecord cur = result.records[idxs[0]];
        for (std::size_t i = 1; i < idxs.size(); ++i) {
            const ContactRecord& next = result.records[idxs[i]];
            if (next.start_s <= cur.end_s) {
                result.warnings.push_back("merged overlapping contacts of pair (" + key.first +
                                          "," + key.second + ") at t=" +
                                          std::to_string(next.start_s));
                cur.end_s = std::max(cur.end_s, next.end_s);
            } else {
                merged.push_back(cur);
                cur = next;
            }
        }
        merged.push_back(cur);
    }
    std::sort(merged.begin(), merged.end(), [](const ContactRecord& a, const ContactRecord& b) {
        if (a.start_s != b.start_s) return a.start_s < b.start_s;
        if (a.node_a != b.node_a) return a.node_a < b.node_a;
        return a.node_b < b.node_b;
    });
    result.records = std::move(merged);
    return result;
}

void write_trace(std::ostream& out, std::span<const ContactRecord> records) {
    out << "node_a,node_b,start_s,end_s\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.start_s, r.end_s);
        out << r.node_a << ',' << r.node_b << ',' << buf << '\n';
    }
}

double TraceStats::duration_ccdf(double d) const {
    if (durations_sorted.empty()) return 0.0;
    const auto it =
        std::lower_bound(durations_sorted.begin(), durations_sorted.end(), d);
    return static_cast<double>(durations_sorted.end() - it) / durations_sorted.size();
}

TraceStats compute_stats(std::span<const ContactRecord> records) {
    TraceStats stats;
    std::map<std::string, std::vector<std::pair<double, double>>> node_intervals;
    std::map<PairKey, std::vector<double>> starts;
    for (const auto& r : records) {
        ++stats.contact_counts[r.node_a];
        ++stats.contact_counts[r.node_b];
        stats.durations_sorted.push_back(r.end_s - r.start_s);
        node_intervals[r.node_a].emplace_back(r.start_s, r.end_s);
        node_intervals[r.node_b].emplace_back(r.start_s, r.end_s);
        starts[make_pair_key(r.node_a, r.node_b)].push_back(r.start_s);
    }
    std::sort(stats.durations_sorted.begin(), stats.durations_sorted.end());

    // Event-weighted neighbor count: for each endpoint of each contact, one
    // (the partner) plus the node's other contacts overlapping in time.
    double neighbor_total = 0.0;
    std::size_t events = 0;
    for (auto& [node, intervals] : node_intervals) {
        std::vector<double> begins, ends;
        begins.reserve(intervals.size());
        ends.reserve(intervals.size());
        for (const auto& [b, e] : intervals) {
            begins.push_back(b);
            ends.push_back(e);
        }
        std::sort(begins.begin(), begins.end());
        std::sort(ends.begin(), ends.end());
        for (const auto& [b, e] : intervals) {
            const auto started_before_end =
                std::lower_bound(begins.begin(), begins.end(), e) - begins.begin();
            const auto ended_by_start =
                std::upper_bound(ends.begin(), ends.end(), b) - ends.begin();
            const long overlapping = started_before_end - ended_by_start - 1; // minus self
            neighbor_total += 1.0 + std::max(overlapping, 0l);
            ++events;
        }
    }
    stats.avg_neighbors = events > 0 ? neighbor_total / events : 0.0;

    for (auto& [key, ts] : starts) {
        if (ts.size() < 2) continue;
        std::sort(ts.begin(), ts.end());
        double sum = 0.0;
        for (std::size_t i = 1; i < ts.size(); ++i) sum += ts[i] - ts[i - 1];
        stats.pair_intercontact_mean_s[key] = sum / (ts.size() - 1);
    }
    return stats;
}

std::map<PairKey, double> pairwise_rates(std::span<const ContactRecord> records,
                                         double horizon_s) {
    if (!(horizon_s > 0.0)) throw std::invalid_argument("pairwise_rates: horizon must be > 0");
    std::map<PairKey, std::size_t> counts;
    for (const auto& r : records) ++counts[make_pair_key(r.node_a, r.node_b)];
    std::map<PairKey, double> rates;
    const double horizon_h = horizon_s / 3600.0;
    for (const auto& [key, c] : counts) rates[key] = c / horizon_h;
    return rates;
}

RateMatrix group_rate_matrix(std::span<const ContactRecord> records,
                             const std::map<std::string, int>& grouping, double horizon_s) {
    if (!(horizon_s > 0.0))
        throw std::invalid_argument("group_rate_matrix: horizon must be > 0");
    int max_group = -1;
    for (const auto& [node, g] : grouping) {
        if (g < 0) throw std::invalid_argument("group_rate_matrix: negative group index");
        max_group = std::max(max_group, g);
    }
    if (max_group < 0) throw std::invalid_argument("group_rate_matrix: empty grouping");
    const std::size_t k = static_cast<std::size_t>(max_group) + 1;

    std::vector<double> group_sizes(k, 0.0);
    for (const auto& [node, g] : grouping) group_sizes[g] += 1.0;
    for (std::size_t g = 0; g < k; ++g)
        if (group_sizes[g] == 0.0)
            throw std::invalid_argument("group_rate_matrix: group " + std::to_string(g) +
                                        " has no nodes");

    auto group_of = [&](const std::string& node) {
        const auto it = grouping.find(node);
        if (it == grouping.end())
            throw std::invalid_argument("group_rate_matrix: unmapped node " + node);
        return static_cast<std::size_t>(it->second);
    };

    RateMatrix contacts(k, 0.0); // undirected contact totals per group pair
    for (const auto& r : records) {
        const auto ga = group_of(r.node_a);
        const auto gb = group_of(r.node_b);
        contacts.at(ga, gb) += 1.0;
        if (ga != gb) contacts.at(gb, ga) += 1.0;
    }

    const double horizon_h = horizon_s / 3600.0;
    RateMatrix rates(k, 0.0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            const double pairs = a == b ? group_sizes[a] * (group_sizes[a] - 1.0) / 2.0
                                        : group_sizes[a] * group_sizes[b];
            if (pairs == 0.0) continue; // singleton group: no intra pairs
            rates.at(a, b) = contacts.at(a, b) / horizon_h / pairs;
        }
    return rates;
}

double susceptibility_estimate(const TraceStats& stats, double transfer_time_s) {
    if (!(transfer_time_s > 0.0))
        throw std::invalid_argument("susceptibility_estimate: transfer time must be > 0");
    if (stats.avg_neighbors < 1.0)
        throw std::invalid_argument("susceptibility_estimate: average neighbors below 1");
    const double p = stats.duration_ccdf(transfer_time_s);
    if (p <= 0.0)
        throw NoFeasibleTransfer("no contact lasts " + std::to_string(transfer_time_s) + " s");
    return std::min(1.0, p / stats.avg_neighbors);
}

IntercontactStats intercontact_stats(std::span<const ContactRecord> records,
                                     const PairKey& pair) {
    std::vector<double> ts;
    for (const auto& r : records)
        if (make_pair_key(r.node_a, r.node_b) == pair) ts.push_back(r.start_s);
    if (ts.size() < 2)
        throw std::invalid_argument("intercontact_stats: need >= 2 contacts for the pair");
    std::sort(ts.begin(), ts.end());

    IntercontactStats out;
    out.gap_count = ts.size() - 1;
    std::vector<double> gaps(out.gap_count);
    for (std::size_t i = 1; i < ts.size(); ++i) gaps[i - 1] = ts[i] - ts[i - 1];
    double sum = 0.0;
    for (double g : gaps) sum += g;
    out.mean_gap_s = sum / gaps.size();
    if (gaps.size() >= 2 && out.mean_gap_s > 0.0) {
        double ss = 0.0;
        for (double g : gaps) ss += (g - out.mean_gap_s) * (g - out.mean_gap_s);
        out.cv = std::sqrt(ss / (gaps.size() - 1)) / out.mean_gap_s;
    }
    return out;
}

std::vector<std::string> node_names(const NetworkSpec& spec) {
    std::vector<std::string> names;
    names.reserve(spec.total_population());
    int idx = 0;
    char buf[32];
    for (std::size_t g = 0; g < spec.group_count(); ++g)
        for (int i = 0; i < spec.groups[g].size; ++i) {
            std::snprintf(buf, sizeof buf, "n%04d", idx++);
            names.emplace_back(buf);
        }
    return names;
}

std::map<std::string, int> default_grouping(const NetworkSpec& spec) {
    std::map<std::string, int> grouping;
    const auto names = node_names(spec);
    std::size_t at = 0;
    for (std::size_t g = 0; g < spec.group_count(); ++g)
        for (int i = 0; i < spec.groups[g].size; ++i) grouping[names[at++]] = static_cast<int>(g);
    return grouping;
}

namespace {

// Exact Poisson draw by inverse products; means are chunked so exp() never
// underflows.
std::uint64_t poisson_draw(rng::SplitMix64& stream, double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
        const double chunk = std::min(mean, 500.0);
        mean -= chunk;
        const double limit = std::exp(-chunk);
        double prod = stream.next_unit();
        std::uint64_t n = 0;
        while (prod > limit) {
            ++n;
            prod *= stream.next_unit();
        }
        total += n;
    }
    return total;
}

} // namespace

std::vector<ContactRecord> generate_trace(const NetworkSpec& base_spec, double horizon_s,
                                          const DurationModel& durations, std::uint64_t seed) {
    // Only the contact topology matters here; seeds and spread reachability
    // are properties of the infection chain, not of the meeting process.
    const std::size_t k = base_spec.group_count();
    if (k == 0 || base_spec.rates.dimension() != k)
        throw ValidationError("generate_trace: malformed spec");
    for (const auto& g : base_spec.groups)
        if (g.size < 1) throw ValidationError("generate_trace: group sizes must be positive");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (!(base_spec.rates.at(a, b) >= 0.0) || !std::isfinite(base_spec.rates.at(a, b)))
                throw ValidationError("generate_trace: rates must be finite and >= 0");
    if (!(horizon_s > 0.0)) throw std::invalid_argument("generate_trace: horizon must be > 0");
    if (!(durations.mean_s > 0.0))
        throw std::invalid_argument("generate_trace: duration mean must be > 0");

    const auto names = node_names(base_spec);
    std::vector<int> group_of;
    for (std::size_t g = 0; g < base_spec.group_count(); ++g)
        group_of.insert(group_of.end(), base_spec.groups[g].size, static_cast<int>(g));

    const double horizon_h = horizon_s / 3600.0;
    std::vector<ContactRecord> records;
    std::uint64_t pair_index = 0;
    for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b, ++pair_index) {
            const double rate = base_spec.rates.at(group_of[a], group_of[b]);
            if (rate <= 0.0) continue;
            auto stream = rng::substream(seed, pair_index);
            const std::uint64_t n = poisson_draw(stream, rate * horizon_h);
            for (std::uint64_t i = 0; i < n; ++i) {
                ContactRecord rec;
                rec.node_a = names[a];
                rec.node_b = names[b];
                rec.start_s = stream.next_unit() * horizon_s;
                const double dur = durations.kind == DurationModel::Kind::exponential
                                       ? stream.next_exponential(1.0 / durations.mean_s)
                                       : durations.mean_s;
                rec.end_s = rec.start_s + dur;
                records.push_back(std::move(rec));
            }
        }
    }
    std::sort(records.begin(), records.end(),
              [](const ContactRecord& x, const ContactRecord& y) {
                  if (x.start_s != y.start_s) return x.start_s < y.start_s;
                  if (x.node_a != y.node_a) return x.node_a < y.node_a;
                  return x.node_b < y.node_b;
              });
    return records;
}

std::map<std::string, int> parse_grouping(std::istream& in) {
    std::map<std::string, int> grouping;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const auto fields = split_fields(text, ',');
        if (fields.size() != 2)
            throw TraceParseError(line_no, "expected node,group");
        const std::string node = trim(fields[0]);
        if (node.empty()) throw TraceParseError(line_no, "empty node identifier");
        grouping[node] =
            static_cast<int>(parse_double(trim(fields[1]), line_no, "group"));
    }
    return grouping;
}

void write_grouping(std::ostream& out, const std::map<std::string, int>& grouping) {
    out << "node,group\n";
    for (const auto& [node, g] : grouping) out << node << ',' << g << '\n';
}

} // namespace spreadtime
