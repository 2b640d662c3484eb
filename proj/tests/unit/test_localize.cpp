#include "doctest.h"

#include <vector>

#include "../oracle.hpp"
#include "beaconloc/localize.hpp"

using namespace beaconloc;

namespace {

std::vector<BeaconPoint> as_points(std::initializer_list<Point3> ps) {
    std::vector<BeaconPoint> out;
    double t = 1.0;
    for (const auto& p : ps) out.push_back({0, p, t++, BeaconKind::entry});
    return out;
}

const AxisAlignedBox kWide{{-1000, -1000, -1000}, {1000, 1000, 1000}};

}  // namespace

TEST_CASE("visitor list logs only the first and last message of a pass") {
    VisitorList list;
    const double t = 1.0, L = 2.0 * t;
    std::vector<BeaconPoint> logged;
    for (int k = 2; k <= 6; ++k) {
        const Point3 p{10.0 * k, 0, 0};
        if (auto bp = list.process_beacon({7, p, double(k)}, L)) logged.push_back(*bp);
        for (auto& e : list.expire_visitors(double(k))) logged.push_back(e);
        if (k > 2) {
            REQUIRE(list.find(7));
            CHECK(list.find(7)->expiry == doctest::Approx(k + L));
        }
    }
    for (int k = 7; k <= 12; ++k)
        for (auto& e : list.expire_visitors(double(k))) logged.push_back(e);

    REQUIRE(logged.size() == 2);
    CHECK(logged[0].kind == BeaconKind::entry);
    CHECK(logged[0].position == Point3{20, 0, 0});
    CHECK(logged[0].logged_at == 2.0);
    CHECK(logged[1].kind == BeaconKind::exit);
    CHECK(logged[1].position == Point3{60, 0, 0});
    CHECK(logged[1].logged_at == 6.0);
    CHECK(list.empty());
}

TEST_CASE("visitor list bookkeeping") {
    VisitorList list;
    CHECK(list.expire_visitors(100).empty());

    CHECK(list.process_beacon({2, {1, 0, 0}, 1.0}, 2.0));
    CHECK(list.process_beacon({1, {2, 0, 0}, 1.0}, 2.0));
    CHECK(list.size() == 2);

    // duplicate timestamp: last write wins, nothing logged
    CHECK_FALSE(list.process_beacon({1, {3, 0, 0}, 1.0}, 2.0));
    CHECK(list.find(1)->last_position == Point3{3, 0, 0});

    CHECK(list.process_beacon({1, {4, 0, 0}, 2.0}, 2.0) == std::nullopt);
    CHECK(list.process_beacon({2, {5, 0, 0}, 2.0}, 2.0) == std::nullopt);
    CHECK(list.expire_visitors(3.9).empty());
    const auto exits = list.expire_visitors(4.0);
    REQUIRE(exits.size() == 2);
    CHECK(exits[0].anchor_id == 1);
    CHECK(exits[1].anchor_id == 2);
    CHECK(exits[0].logged_at == 2.0);
}

TEST_CASE("a pass heard once yields one beacon point") {
    VisitorList list;
    CHECK(list.process_beacon({3, {0, 0, 0}, 5.0}, 2.0));
    CHECK(list.expire_visitors(7.0).empty());
    CHECK(list.empty());
}

TEST_CASE("three-beacon localizer examples") {
    const auto pts = as_points({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
    const std::vector<Point3> witness{{0.1, 0, 0}};

    const auto w = try_localize_three(pts, 2.0, {{0, 0, 0}, {10, 10, 10}}, witness);
    REQUIRE(w);
    CHECK(oracle::dist(w->position, {0, 0, 0}) < 1e-12);
    CHECK(w->ambiguity == Ambiguity::disambiguated_by_witness);
    CHECK(w->beacons_used.size() == 3);
    CHECK(w->method == LocalizerMethod::three_beacon);

    const auto b = try_localize_three(pts, 2.0, {{-1, -1, -1}, {1, 1, 1}}, {});
    REQUIRE(b);
    CHECK(oracle::dist(b->position, {0, 0, 0}) < 1e-12);
    CHECK(b->ambiguity == Ambiguity::disambiguated_by_bounds);

    // both candidates inside, no witness: defer
    CHECK_FALSE(try_localize_three(pts, 2.0, {{-10, -10, -10}, {10, 10, 10}}, {}));

    CHECK_FALSE(try_localize_three(as_points({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), 2.0, kWide, {}));
    CHECK_FALSE(try_localize_three(as_points({{0, 0, 0}, {1, 0, 0}}), 2.0, kWide, {}));
    // circumradius above the range
    CHECK_FALSE(try_localize_three(as_points({{5, 0, 0}, {-5, 0, 0}, {0, 5, 0}}), 2.0, kWide, {}));
}

TEST_CASE("three-beacon localizer skips degenerate triples in logging order") {
    // a repeated point makes every triple of the first three, and (0,1,3), degenerate
    const auto pts = as_points({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}});
    const auto est = try_localize_three(pts, 1.0, kWide, {});
    REQUIRE(est);
    CHECK(est->ambiguity == Ambiguity::unique);
    CHECK(oracle::dist(est->position, {0, 0, 0}) < 1e-12);
    CHECK(est->beacons_used[0].logged_at == 1.0);
    CHECK(est->beacons_used[1].position == Point3{0, 1, 0});
    CHECK(est->beacons_used[2].position == Point3{-1, 0, 0});
    CHECK(est->fixed_at == 4.0);
}

TEST_CASE("three-beacon: extra beacon points break a witness tie") {
    oracle::Rng rng(3);
    const Point3 truth{1, 2, 3};
    auto p = oracle::sphere_points<4>(rng, truth, 5.0, oracle::deg(20));
    std::vector<BeaconPoint> pts;
    for (const auto& q : p) pts.push_back({1, q, 0.0, BeaconKind::entry});
    if (std::abs(dot(normalized(cross(p[1] - p[0], p[2] - p[0])), p[3] - p[0])) < 1e-3) return;
    const auto est = try_localize_three(pts, 5.0, kWide, {});
    REQUIRE(est);
    CHECK(oracle::dist(est->position, truth) < 1e-9 * 5.0);
}

TEST_CASE("three-beacon witness soundness and noise-free exactness") {
    oracle::Rng rng(17);
    int resolved = 0;
    for (int i = 0; i < 500; ++i) {
        const Point3 truth = rng.in_cube(400);
        const double R = 100;
        const auto p = oracle::sphere_points<3>(rng, truth, R, oracle::deg(10));
        std::vector<BeaconPoint> pts;
        for (const auto& q : p) pts.push_back({1, q, 0.0, BeaconKind::entry});
        std::vector<Point3> witnesses;
        for (int w = 0; w < 5; ++w) witnesses.push_back(truth + rng.direction() * rng.uniform(0, R));

        const auto est = try_localize_three(pts, R, kWide, witnesses);
        if (!est) continue;
        ++resolved;
        if (est->ambiguity == Ambiguity::disambiguated_by_witness)
            for (const auto& w : witnesses) CHECK(oracle::dist(est->position, w) <= R * (1 + 1e-9));
        CHECK(oracle::dist(est->position, truth) <= 1e-9 * R);
    }
    CHECK(resolved > 250);
}

TEST_CASE("four-beacon baselines examples") {
    const auto sym = as_points({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const auto alg = localize_four_algebraic(sym);
    REQUIRE(alg);
    CHECK(oracle::dist(alg->position, {0, 0, 0}) < 1e-12);
    CHECK(alg->beacons_used.size() == 4);

    const auto chord = localize_four_chord(sym);
    REQUIRE(chord);
    CHECK(oracle::dist(chord->position, {0, 0, 0}) < 1e-12);
    CHECK(chord->beacons_used.size() == 4);

    const auto coplanar = as_points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
    CHECK_FALSE(localize_four_chord(coplanar));
    CHECK_FALSE(localize_four_algebraic(coplanar));
    CHECK_FALSE(localize_four_algebraic(as_points({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}})));

    CHECK_THROWS_AS(localize_four_chord(sym, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(localize_four_chord(sym, 90.0), std::invalid_argument);
}

TEST_CASE("chord baseline rejects nearly parallel circle planes") {
    // (1,2,3) and (1,2,4) lie in planes about 3 degrees apart
    const double a = oracle::deg(3);
    const auto pts = as_points({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, std::cos(a), std::sin(a)}});
    CHECK_FALSE(localize_four_chord(pts, 10.0));
    CHECK(localize_four_chord(pts, 2.0));
}

TEST_CASE("four-beacon baselines agree on random spheres") {
    oracle::Rng rng(23);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const Point3 center = rng.in_cube(500);
        const double r = rng.uniform(1, 300);
        const auto p = oracle::sphere_points<4>(rng, center, r, oracle::deg(20));
        std::vector<BeaconPoint> pts;
        for (const auto& q : p) pts.push_back({1, q, 0.0, BeaconKind::entry});
        const auto chord = localize_four_chord(pts);
        const auto alg = localize_four_algebraic(pts);
        if (!chord || !alg) continue;
        ++checked;
        CHECK(oracle::dist(chord->position, center) <= 1e-9 * r);
        CHECK(oracle::dist(alg->position, center) <= 1e-9 * r);
        CHECK(oracle::dist(chord->position, alg->position) <= 1e-9 * r);

        const auto c1 = circumcircle_vector_method(p[0], p[1], p[2]);
        const auto c2 = circumcircle_vector_method(p[0], p[1], p[3]);
        const auto meet = closest_approach(c1.center, c1.normal, c2.center, c2.normal);
        REQUIRE(meet);
        CHECK(meet->gap <= 1e-9 * r);
    }
    CHECK(checked > 800);
}

TEST_CASE("method names round trip") {
    for (auto m : {LocalizerMethod::three_beacon, LocalizerMethod::four_beacon_chord,
                   LocalizerMethod::four_beacon_algebraic})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_FALSE(parse_method("five_beacon"));
    CHECK(beacons_required(LocalizerMethod::three_beacon) == 3);
    CHECK(beacons_required(LocalizerMethod::four_beacon_chord) == 4);
}
