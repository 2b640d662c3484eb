#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beaconloc/sim.hpp"

namespace beaconloc {

/// Shortest round-trip decimal, '.' separator, independent of the global locale.
std::string format_number(double value);

inline constexpr std::string_view kNodeCsvHeader =
    "node_id,true_x,true_y,true_z,est_x,est_y,est_z,error_m,fixed_at_s,beacons_used,ambiguity";
inline constexpr std::string_view kSummaryCsvHeader =
    "method,anchor_pct,seed,ale_m,alt_s,beacon_overhead,localized_fraction,runtime_s";
inline constexpr std::string_view kAggregateCsvHeader =
    "method,anchor_pct,params,runs,ale_m,alt_s,beacon_overhead,localized_fraction,runtime_s,overhead_at_90,"
    "reached_90_fraction,beacons_per_fix";

/// One row per node. Unlocalized nodes leave the estimate columns empty and report
/// ambiguity "unlocalized".
void write_node_csv(std::ostream& out, const MetricsReport& report);

/// A summary row without the trailing newline. runtime_s is simulated seconds.
std::string summary_row(const MetricsReport& report);

/// Means over the runs of one sweep cell.
struct CellAggregate {
    LocalizerMethod method = LocalizerMethod::three_beacon;
    double anchor_pct = 0.0;
    std::string params;
    std::size_t runs = 0;
    double ale = 0.0;
    double alt = 0.0;
    double beacon_overhead = 0.0;
    double localized_fraction = 0.0;
    double simulated_time = 0.0;
    double overhead_at_90 = 0.0;  // over runs that reached 90%
    double reached_90_fraction = 0.0;
    double beacons_per_fix = 0.0;  // beacon points consumed per localized node
};

CellAggregate aggregate(std::span<const MetricsReport> runs, std::string params = {});
std::string aggregate_row(const CellAggregate& cell);

}  // namespace beaconloc
