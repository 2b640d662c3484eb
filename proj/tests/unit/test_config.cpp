#include "doctest.h"

#include "beaconloc/config.hpp"
#include "beaconloc/report.hpp"
#include "beaconloc/sweep.hpp"

using namespace beaconloc;

TEST_CASE("scenario parsing") {
    const auto c = parse_scenario(
        "# desk run\n"
        "comm_range = 80   # meters\n"
        "field = 400 300 200\n"
        "method = four_beacon_chord\n"
        "mobility = direction\n"
        "seed = 42\n"
        "exact_beacon_points = true\n",
        "a.cfg");
    CHECK(c.comm_range == 80.0);
    CHECK(c.field.max == Point3{400, 300, 200});
    CHECK(c.method == LocalizerMethod::four_beacon_chord);
    CHECK(c.mobility == MobilityModel::direction);
    CHECK(c.seed == 42);
    CHECK(c.exact_beacon_points);
    CHECK(c.n_static == 300);

    const auto paper = parse_scenario("comm_range = 100\n", "p.cfg", Preset::paper);
    CHECK(paper.n_static == 3000);
}

TEST_CASE("scenario format round trips") {
    ScenarioConfig c;
    c.field = {{-10, 0, 5}, {490.5, 500, 505}};
    c.anchor_pct = 2.5;
    c.method = LocalizerMethod::four_beacon_algebraic;
    c.chord_min_angle_deg = 12.5;
    c.seed = 1234567890123ULL;
    CHECK(parse_scenario(format_scenario(c), "rt") == c);
}

TEST_CASE("scenario parse errors carry line numbers") {
    auto message = [](const char* text) {
        try {
            parse_scenario(text, "bad.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("field = 100 100 100\n") == "bad.cfg: missing required key 'comm_range'");
    CHECK(message("comm_range = 100\nspeed\n") == "bad.cfg:2: expected 'key = value'");
    CHECK(message("comm_range = abc\n") == "bad.cfg:1: key 'comm_range' expects a number, got 'abc'");
    CHECK(message("comm_range = 100\nwarp = 9\n") == "bad.cfg:2: unknown key 'warp'");
    CHECK(message("comm_range = 100\n\ncomm_range = 50\n") ==
          "bad.cfg:3: duplicate key 'comm_range' (first set on line 1)");
    CHECK(message("comm_range =\n") == "bad.cfg:1: missing value for key 'comm_range'");
    CHECK(message("comm_range = -5\n").find("comm_range must be positive") != std::string::npos);
    CHECK(message("comm_range = 100\nfield = 1 2\n").starts_with("bad.cfg:2:"));
}

TEST_CASE("number formatting is shortest round trip") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(1.0 / 3) == "0.3333333333333333");
}

TEST_CASE("sweep expansion") {
    const auto spec = parse_sweep(
        "comm_range = 100\n"
        "max_time = 10\n"
        "vary.method = three_beacon, four_beacon_chord, four_beacon_algebraic\n"
        "vary.anchor_pct = 1, 2, 3, 4, 5\n"
        "seeds = 1, 2, 3, 4, 5\n",
        "s.sweep");
    const auto cells = expand(spec);
    REQUIRE(cells.size() == 15);
    std::size_t runs = 0;
    for (const auto& cell : cells) runs += cell.runs.size();
    CHECK(runs == 75);
    CHECK(cells[0].runs[0].method == LocalizerMethod::three_beacon);
    CHECK(cells[1].runs[0].anchor_pct == 2.0);
    CHECK(cells[5].runs[0].method == LocalizerMethod::four_beacon_chord);
    CHECK(cells[0].runs[4].seed == 5);
    CHECK(cells[0].params.empty());

    const auto other = expand(parse_sweep("comm_range = 100\nvary.anchor_speed = 5, 10\n", "t"));
    REQUIRE(other.size() == 2);
    CHECK(other[1].params == "anchor_speed=10");
    CHECK(other[0].runs.size() == 1);

    CHECK_THROWS_AS(parse_sweep("vary.anchor_pct = 1\n", "u"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("comm_range = 100\nvary.method = fast\n", "u"), ConfigError);
    CHECK_THROWS_AS(expand(parse_sweep("comm_range = 100\nvary.n_static = 10, 0\n", "u")), ConfigError);
}

TEST_CASE("aggregate of identical runs equals the run") {
    MetricsReport r;
    r.method = LocalizerMethod::four_beacon_chord;
    r.anchor_pct = 3;
    r.ale = 12.5;
    r.alt = 200.25;
    r.beacon_overhead = 3000;
    r.localized_fraction = 0.96;
    r.simulated_time = 3000;
    r.overhead_at_90 = 640;
    r.reached_90 = true;
    r.beacon_points_consumed = 40;
    r.localized_nodes = 10;
    const std::vector<MetricsReport> runs(5, r);
    const auto cell = aggregate(runs, "x=1");
    CHECK(cell.runs == 5);
    CHECK(cell.ale == doctest::Approx(12.5));
    CHECK(cell.alt == doctest::Approx(200.25));
    CHECK(cell.localized_fraction == doctest::Approx(0.96));
    CHECK(cell.overhead_at_90 == doctest::Approx(640));
    CHECK(cell.reached_90_fraction == 1.0);
    CHECK(cell.beacons_per_fix == 4.0);
    CHECK(aggregate_row(cell).starts_with("four_beacon_chord,3,x=1,5,12.5,200.25,3000,0.96,3000,640,1,4"));
}

TEST_CASE("ordered parallel runs") {
    std::vector<ScenarioConfig> configs;
    for (std::uint64_t s = 1; s <= 6; ++s) {
        ScenarioConfig c;
        c.n_static = 50;
        c.anchor_pct = 4;
        c.max_time = 50;
        c.seed = s;
        configs.push_back(c);
    }
    std::vector<std::string> serial, parallel;
    run_ordered(configs, 1, [&](std::size_t, MetricsReport&& r) { serial.push_back(summary_row(r)); });
    std::vector<std::size_t> order;
    run_ordered(configs, 4, [&](std::size_t i, MetricsReport&& r) {
        order.push_back(i);
        parallel.push_back(summary_row(r));
    });
    CHECK(serial == parallel);
    CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});

    configs[3].n_static = 0;
    CHECK_THROWS_AS(run_ordered(configs, 2, [](std::size_t, MetricsReport&&) {}), InvalidConfig);
}
