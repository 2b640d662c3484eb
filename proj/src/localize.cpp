#include "beaconloc/localize.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>

namespace beaconloc {

std::optional<BeaconPoint> VisitorList::process_beacon(const BeaconMessage& msg, double lifetime) {
    const double expiry = msg.timestamp + lifetime;
    auto it = entries_.find(msg.anchor_id);
    if (it != entries_.end()) {
        it->second.last_position = msg.position;
        it->second.last_heard = msg.timestamp;
        it->second.expiry = expiry;
        return std::nullopt;
    }
    entries_.emplace(msg.anchor_id, Entry{msg.position, msg.timestamp, msg.timestamp, expiry});
    return BeaconPoint{msg.anchor_id, msg.position, msg.timestamp, BeaconKind::entry};
}

std::vector<BeaconPoint> VisitorList::expire_visitors(double now) {
    std::vector<BeaconPoint> exits;
    for (auto it = entries_.begin(); it != entries_.end();) {
        const Entry& e = it->second;
        if (e.expiry <= now) {
            if (e.last_heard > e.first_heard) {
                exits.push_back({it->first, e.last_position, e.last_heard, BeaconKind::exit});
            }
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
    return exits;
}

const VisitorList::Entry* VisitorList::find(AnchorId id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::string_view to_string(LocalizerMethod m) {
    switch (m) {
        case LocalizerMethod::three_beacon: return "three_beacon";
        case LocalizerMethod::four_beacon_chord: return "four_beacon_chord";
        case LocalizerMethod::four_beacon_algebraic: return "four_beacon_algebraic";
    }
    return "unknown";
}

std::string_view to_string(Ambiguity a) {
    switch (a) {
        case Ambiguity::unique: return "unique";
        case Ambiguity::disambiguated_by_witness: return "disambiguated_by_witness";
        case Ambiguity::disambiguated_by_bounds: return "disambiguated_by_bounds";
        case Ambiguity::unresolved: return "unresolved";
    }
    return "unknown";
}

std::string_view to_string(BeaconKind k) {
    return k == BeaconKind::entry ? "entry" : "exit";
}

std::optional<LocalizerMethod> parse_method(std::string_view name) {
    for (auto m : {LocalizerMethod::three_beacon, LocalizerMethod::four_beacon_chord,
                   LocalizerMethod::four_beacon_algebraic}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

// Visits index triples so that every triple of the first k points comes before any
// triple that needs point k. Stops when the visitor returns true.
template <class Visitor>
bool for_each_triple(std::size_t n, Visitor&& visit) {
    for (std::size_t k = 2; k < n; ++k)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (visit(i, j, k)) return true;
    return false;
}

template <class Visitor>
bool for_each_quadruple(std::size_t n, Visitor&& visit) {
    for (std::size_t l = 3; l < n; ++l)
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = i + 1; j < l; ++j)
                for (std::size_t k = j + 1; k < l; ++k)
                    if (visit(i, j, k, l)) return true;
    return false;
}

double latest(std::span<const BeaconPoint> used) {
    double t = used.front().logged_at;
    for (const auto& p : used) t = std::max(t, p.logged_at);
    return t;
}

LocalizationEstimate make_estimate(const Point3& position, LocalizerMethod method, std::vector<BeaconPoint> used,
                                   Ambiguity ambiguity) {
    LocalizationEstimate est;
    est.position = position;
    est.method = method;
    est.fixed_at = latest(used);
    est.beacons_used = std::move(used);
    est.ambiguity = ambiguity;
    return est;
}

std::size_t count_consistent(const Point3& candidate, double reach, std::span<const Point3> witnesses,
                             const std::array<Point3, 3>& triple) {
    std::size_t count = 0;
    for (const auto& w : witnesses) {
        if (std::find(triple.begin(), triple.end(), w) != triple.end()) continue;
        if (distance(candidate, w) <= reach) ++count;
    }
    return count;
}

// Total misfit (meters) of the beacon points outside the triple against a sphere of
// radius comm_range around the candidate. Those points were logged as sphere endpoints.
double sphere_misfit(const Point3& candidate, double comm_range, std::span<const BeaconPoint> points,
                     const std::array<std::size_t, 3>& triple) {
    double misfit = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (std::find(triple.begin(), triple.end(), p) != triple.end()) continue;
        misfit += std::abs(distance(candidate, points[p].position) - comm_range);
    }
    return misfit;
}

}  // namespace

std::optional<LocalizationEstimate> try_localize_three(std::span<const BeaconPoint> points, double comm_range,
                                                       const AxisAlignedBox& field, std::span<const Point3> witnesses) {
    if (!(comm_range > 0.0)) throw std::invalid_argument("communication range must be positive");

    std::optional<LocalizationEstimate> result;
    for_each_triple(points.size(), [&](std::size_t i, std::size_t j, std::size_t k) {
        const std::array<Point3, 3> triple{points[i].position, points[j].position, points[k].position};
        if (is_collinear(triple[0], triple[1], triple[2])) return false;

        SphereCenterCandidates candidates;
        try {
            const auto circle = circumcircle_vector_method(triple[0], triple[1], triple[2]);
            candidates = sphere_centers_from_circle(circle, comm_range);
        } catch (const GeometryError&) {
            return false;
        }

        // First usable triple decides; a tie below means wait for more messages.
        std::vector<BeaconPoint> used{points[i], points[j], points[k]};
        if (candidates.plus == candidates.minus) {
            result = make_estimate(candidates.plus, LocalizerMethod::three_beacon, std::move(used), Ambiguity::unique);
            return true;
        }

        const double slack = tolerance::radius * comm_range;
        const bool plus_inside = field.contains(candidates.plus, slack);
        const bool minus_inside = field.contains(candidates.minus, slack);
        if (plus_inside != minus_inside) {
            result = make_estimate(plus_inside ? candidates.plus : candidates.minus, LocalizerMethod::three_beacon,
                                   std::move(used), Ambiguity::disambiguated_by_bounds);
            return true;
        }

        const double reach = comm_range * (1.0 + tolerance::radius);
        const auto plus_votes = count_consistent(candidates.plus, reach, witnesses, triple);
        const auto minus_votes = count_consistent(candidates.minus, reach, witnesses, triple);
        if (plus_votes != minus_votes) {
            result = make_estimate(plus_votes > minus_votes ? candidates.plus : candidates.minus,
                                   LocalizerMethod::three_beacon, std::move(used), Ambiguity::disambiguated_by_witness);
            return true;
        }

        const std::array<std::size_t, 3> chosen{i, j, k};
        const double plus_misfit = sphere_misfit(candidates.plus, comm_range, points, chosen);
        const double minus_misfit = sphere_misfit(candidates.minus, comm_range, points, chosen);
        // Points in the circle plane are equidistant from both candidates; only a
        // difference above round-off decides.
        if (std::abs(plus_misfit - minus_misfit) > tolerance::radius * comm_range) {
            result = make_estimate(plus_misfit < minus_misfit ? candidates.plus : candidates.minus,
                                   LocalizerMethod::three_beacon, std::move(used), Ambiguity::disambiguated_by_witness);
        }
        return true;
    });
    return result;
}

std::optional<LocalizationEstimate> localize_four_chord(std::span<const BeaconPoint> points, double min_angle_deg) {
    if (!(min_angle_deg > 0.0 && min_angle_deg < 90.0)) {
        throw std::invalid_argument("chord angle threshold must lie in (0, 90) degrees");
    }
    const double max_cos = std::cos(min_angle_deg * std::numbers::pi / 180.0);

    std::optional<LocalizationEstimate> result;
    for_each_quadruple(points.size(), [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const Point3& b1 = points[i].position;
        const Point3& b2 = points[j].position;
        const Point3& b3 = points[k].position;
        const Point3& b4 = points[l].position;
        if (is_coplanar(b1, b2, b3, b4)) return false;

        CircleCrossSection first;
        CircleCrossSection second;
        try {
            first = circumcircle_vector_method(b1, b2, b3);
            second = circumcircle_vector_method(b1, b2, b4);
        } catch (const GeometryError&) {
            return false;
        }
        if (std::abs(dot(first.normal, second.normal)) >= max_cos) return false;

        const auto meet = closest_approach(first.center, first.normal, second.center, second.normal);
        if (!meet) return false;
        result = make_estimate(meet->midpoint, LocalizerMethod::four_beacon_chord,
                               {points[i], points[j], points[k], points[l]}, Ambiguity::unique);
        return true;
    });
    return result;
}

std::optional<LocalizationEstimate> localize_four_algebraic(std::span<const BeaconPoint> points) {
    std::optional<LocalizationEstimate> result;
    for_each_quadruple(points.size(), [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        try {
            const Point3 center = solve_sphere_from_four_points(points[i].position, points[j].position,
                                                                points[k].position, points[l].position);
            result = make_estimate(center, LocalizerMethod::four_beacon_algebraic,
                                   {points[i], points[j], points[k], points[l]}, Ambiguity::unique);
            return true;
        } catch (const GeometryError&) {
            return false;
        }
    });
    return result;
}

}  // namespace beaconloc
