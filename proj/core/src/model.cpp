#include "spreadtime/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace spreadtime {

int NetworkSpec::total_population() const {
    int n = 0;
    for (const auto& g : groups) n += g.size;
    return n;
}

int NetworkSpec::total_seeds() const {
    int s = 0;
    for (const auto& g : groups) s += g.seeds;
    return s;
}

std::vector<int> NetworkSpec::sizes() const {
    std::vector<int> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(g.size);
    return out;
}

std::vector<int> NetworkSpec::seed_counts() const {
    std::vector<int> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(g.seeds);
    return out;
}

NetworkSpec homogeneous_spec(int size, double rate, int seeds) {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{size, 1.0, 1.0, seeds});
    spec.rates = RateMatrix::constant(1, rate);
    return spec;
}

double effective_rate(double meeting_rate, double infectivity, double susceptibility) {
    if (!(meeting_rate >= 0.0))
        throw std::invalid_argument("effective_rate: meeting rate must be >= 0");
    if (!(infectivity > 0.0 && infectivity <= 1.0))
        throw std::invalid_argument("effective_rate: infectivity must be in (0,1]");
    if (!(susceptibility > 0.0 && susceptibility <= 1.0))
        throw std::invalid_argument("effective_rate: susceptibility must be in (0,1]");
    return meeting_rate * infectivity * susceptibility;
}

NetworkSpec effective_rates(const NetworkSpec& spec) {
    require_valid(spec);
    NetworkSpec out = spec;
    const std::size_t k = spec.group_count();
    for (std::size_t from = 0; from < k; ++from)
        for (std::size_t to = 0; to < k; ++to)
            out.rates.at(from, to) = effective_rate(spec.rates.at(from, to),
                                                    spec.groups[from].infectivity,
                                                    spec.groups[to].susceptibility);
    return out;
}

std::string ValidationReport::joined() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

ValidationReport validate_spec(const NetworkSpec& spec) {
    ValidationReport report;
    auto flag = [&](const std::string& msg) { report.violations.push_back(msg); };

    const std::size_t k = spec.group_count();
    if (k == 0) {
        flag("spec has no groups");
        return report;
    }
    if (spec.rates.dimension() != k)
        flag("rate matrix dimension " + std::to_string(spec.rates.dimension()) +
             " does not match group count " + std::to_string(k));

    for (std::size_t i = 0; i < k; ++i) {
        const auto& g = spec.groups[i];
        const std::string tag = "group " + std::to_string(i);
        if (g.size < 1) flag(tag + ": size must be positive");
        if (!(g.infectivity > 0.0 && g.infectivity <= 1.0))
            flag(tag + ": infectivity must be in (0,1]");
        if (!(g.susceptibility > 0.0 && g.susceptibility <= 1.0))
            flag(tag + ": susceptibility must be in (0,1]");
        if (g.seeds < 0 || g.seeds > g.size)
            flag(tag + ": seeds must be in [0,size]");
    }

    if (spec.total_population() < 2) flag("total population must be at least 2");
    if (spec.total_seeds() < 1) flag("at least one seed required");

    if (spec.rates.dimension() == k) {
        bool any_positive = false;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const double r = spec.rates.at(i, j);
                if (!(r >= 0.0) || !std::isfinite(r))
                    flag("rate (" + std::to_string(i) + "," + std::to_string(j) +
                         ") must be finite and >= 0");
                else if (r > 0.0)
                    any_positive = true;
            }
        if (!any_positive) flag("rate matrix must have at least one positive entry");

        // A group with uninformed nodes and a zero incoming column can never
        // be infected, so full absorption is impossible.
        for (std::size_t to = 0; to < k; ++to) {
            if (spec.groups[to].size <= spec.groups[to].seeds) continue;
            bool reachable = false;
            for (std::size_t from = 0; from < k; ++from)
                if (spec.rates.at(from, to) > 0.0) reachable = true;
            if (!reachable)
                flag("degenerate reachability: group " + std::to_string(to) +
                     " has uninformed nodes but zero incoming rate from every group");
        }
    }
    return report;
}

void require_valid(const NetworkSpec& spec) {
    const auto report = validate_spec(spec);
    if (!report.ok()) throw ValidationError(report.joined());
}

double average_pair_rate(const RateMatrix& rates, std::pair<int, int> sizes) {
    const auto [n1, n2] = sizes;
    const double n = n1 + n2;
    double total = 0.0;
    total += static_cast<double>(n1) * (n1 - 1) * rates.at(0, 0);
    total += static_cast<double>(n2) * (n2 - 1) * rates.at(1, 1);
    total += static_cast<double>(n1) * n2 * (rates.at(0, 1) + rates.at(1, 0));
    return total / (n * (n - 1.0));
}

RateMatrix fair_rate_matrix(double mean_rate, std::pair<int, int> sizes,
                            double gamma1, double gamma2) {
    const auto [n1, n2] = sizes;
    if (n1 != n2) throw std::invalid_argument("fair_rate_matrix: group sizes must be equal");
    if (n1 < 1) throw std::invalid_argument("fair_rate_matrix: sizes must be positive");
    if (!(mean_rate > 0.0)) throw std::invalid_argument("fair_rate_matrix: mean rate must be > 0");
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw std::invalid_argument("fair_rate_matrix: ratios must be >= 0");
    if (gamma1 == 0.0 && gamma2 == 0.0 && n1 <= 1)
        throw std::invalid_argument("fair_rate_matrix: unsolvable for gamma1=gamma2=0 with N1<=1");

    // Solve n(n-1)(g1+g2)*l12 + 2n^2*l12 = mean * N(N-1) with N = 2n.
    const double n = n1;
    const double denom = (n - 1.0) * (gamma1 + gamma2) + 2.0 * n;
    if (!(denom > 0.0))
        throw std::invalid_argument("fair_rate_matrix: constraint denominator must be positive");
    const double l12 = mean_rate * 2.0 * (2.0 * n - 1.0) / denom;

    RateMatrix out(2);
    out.at(0, 0) = gamma1 * l12;
    out.at(1, 1) = gamma2 * l12;
    out.at(0, 1) = l12;
    out.at(1, 0) = l12;
    return out;
}

RateMatrix special_case_rates(double mean_rate, double gamma) {
    if (!(mean_rate > 0.0))
        throw std::invalid_argument("special_case_rates: mean rate must be > 0");
    if (!(gamma >= 1.0)) throw std::invalid_argument("special_case_rates: gamma must be >= 1");
    RateMatrix out(2);
    out.at(0, 0) = 2.0 * gamma * mean_rate / (gamma + 1.0);
    out.at(1, 1) = 2.0 * mean_rate / (gamma + 1.0);
    out.at(0, 1) = mean_rate;
    out.at(1, 0) = mean_rate;
    return out;
}

std::string spec_to_json_string(const NetworkSpec& spec, int indent) {
    nlohmann::json j;
    j["groups"] = nlohmann::json::array();
    for (const auto& g : spec.groups)
        j["groups"].push_back({{"size", g.size},
                               {"infectivity", g.infectivity},
                               {"susceptibility", g.susceptibility},
                               {"seeds", g.seeds}});
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.rates.dimension(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t jdx = 0; jdx < spec.rates.dimension(); ++jdx)
            row.push_back(spec.rates.at(i, jdx));
        rows.push_back(row);
    }
    j["rates"] = rows;
    j["rate_units"] = "per_hour";
    return j.dump(indent);
}

NetworkSpec spec_from_json_string(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("spec JSON parse error: ") + e.what());
    }
    try {
        if (j.contains("rate_units") && j.at("rate_units") != "per_hour")
            throw ValidationError("spec rate_units must be per_hour");
        NetworkSpec spec;
        for (const auto& g : j.at("groups")) {
            GroupProfile p;
            p.size = g.at("size").get<int>();
            p.infectivity = g.value("infectivity", 1.0);
            p.susceptibility = g.value("susceptibility", 1.0);
            p.seeds = g.value("seeds", 0);
            spec.groups.push_back(p);
        }
        const auto& rows = j.at("rates");
        spec.rates = RateMatrix(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw ValidationError("spec rates must be a square matrix");
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                spec.rates.at(i, k) = rows[i][k].get<double>();
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("spec JSON: ") + e.what());
    }
}

} // namespace spreadtime
