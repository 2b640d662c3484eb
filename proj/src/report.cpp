#include "beaconloc/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace beaconloc {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

void write_node_csv(std::ostream& out, const MetricsReport& report) {
    out << kNodeCsvHeader << '\n';
    for (const auto& node : report.nodes) {
        out << node.node_id << ',' << format_number(node.truth.x) << ',' << format_number(node.truth.y) << ','
            << format_number(node.truth.z) << ',';
        if (const auto& est = node.estimate) {
            out << format_number(est->position.x) << ',' << format_number(est->position.y) << ','
                << format_number(est->position.z) << ',' << format_number(node.error()) << ','
                << format_number(est->fixed_at) << ',' << est->beacons_used.size() << ',' << to_string(est->ambiguity);
        } else {
            out << ",,,,,0,unlocalized";
        }
        out << '\n';
    }
}

std::string summary_row(const MetricsReport& r) {
    std::string row;
    row += to_string(r.method);
    row += ',' + format_number(r.anchor_pct);
    row += ',' + std::to_string(r.seed);
    row += ',' + format_number(r.ale);
    row += ',' + format_number(r.alt);
    row += ',' + format_number(r.beacon_overhead);
    row += ',' + format_number(r.localized_fraction);
    row += ',' + format_number(r.simulated_time);
    return row;
}

CellAggregate aggregate(std::span<const MetricsReport> runs, std::string params) {
    CellAggregate cell;
    cell.params = std::move(params);
    cell.runs = runs.size();
    if (runs.empty()) return cell;
    cell.method = runs.front().method;
    cell.anchor_pct = runs.front().anchor_pct;

    std::size_t reached = 0;
    std::int64_t consumed = 0;
    std::int64_t localized = 0;
    for (const auto& r : runs) {
        cell.ale += r.ale;
        cell.alt += r.alt;
        cell.beacon_overhead += r.beacon_overhead;
        cell.localized_fraction += r.localized_fraction;
        cell.simulated_time += r.simulated_time;
        if (r.reached_90) {
            ++reached;
            cell.overhead_at_90 += r.overhead_at_90;
        }
        consumed += r.beacon_points_consumed;
        localized += r.localized_nodes;
    }
    const auto n = static_cast<double>(runs.size());
    cell.ale /= n;
    cell.alt /= n;
    cell.beacon_overhead /= n;
    cell.localized_fraction /= n;
    cell.simulated_time /= n;
    cell.overhead_at_90 = reached > 0 ? cell.overhead_at_90 / static_cast<double>(reached) : 0.0;
    cell.reached_90_fraction = static_cast<double>(reached) / n;
    cell.beacons_per_fix = localized > 0 ? static_cast<double>(consumed) / static_cast<double>(localized) : 0.0;
    return cell;
}

std::string aggregate_row(const CellAggregate& c) {
    std::string row;
    row += to_string(c.method);
    row += ',' + format_number(c.anchor_pct);
    row += ',' + c.params;
    row += ',' + std::to_string(c.runs);
    row += ',' + format_number(c.ale);
    row += ',' + format_number(c.alt);
    row += ',' + format_number(c.beacon_overhead);
    row += ',' + format_number(c.localized_fraction);
    row += ',' + format_number(c.simulated_time);
    row += ',' + format_number(c.overhead_at_90);
    row += ',' + format_number(c.reached_90_fraction);
    row += ',' + format_number(c.beacons_per_fix);
    return row;
}

}  // namespace beaconloc
