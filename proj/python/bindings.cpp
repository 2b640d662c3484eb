#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beaconloc/config.hpp"
#include "beaconloc/geom3d.hpp"
#include "beaconloc/localize.hpp"
#include "beaconloc/report.hpp"
#include "beaconloc/sim.hpp"

namespace py = pybind11;
using namespace beaconloc;

namespace {

Vec3 vec_from_sequence(const py::sequence& s) {
    if (py::len(s) != 3) throw py::value_error("expected 3 coordinates");
    return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

std::string vec_repr(const Vec3& v) {
    return "Vec3(" + format_number(v.x) + ", " + format_number(v.y) + ", " + format_number(v.z) + ")";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Range-free 3-D localization with mobile anchors";

    auto geometry_error = py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<CollinearBeacons>(m, "CollinearBeacons", geometry_error.ptr());
    py::register_exception<DegenerateBisectors>(m, "DegenerateBisectors", geometry_error.ptr());
    py::register_exception<RadiusExceedsRange>(m, "RadiusExceedsRange", geometry_error.ptr());
    py::register_exception<CoplanarBeacons>(m, "CoplanarBeacons", geometry_error.ptr());
    py::register_exception<NonFiniteInput>(m, "NonFiniteInput", geometry_error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }), py::arg("x"), py::arg("y"),
             py::arg("z"))
        .def(py::init(&vec_from_sequence))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * double())
        .def(double() * py::self)
        .def(py::self == py::self)
        .def("__iter__", [](const Vec3& v) { return py::iter(py::make_tuple(v.x, v.y, v.z)); })
        .def("__getitem__",
             [](const Vec3& v, int i) {
                 if (i < 0) i += 3;
                 if (i < 0 || i > 2) throw py::index_error();
                 return v[i];
             })
        .def("__len__", [](const Vec3&) { return 3; })
        .def("__repr__", &vec_repr);
    py::implicitly_convertible<py::sequence, Vec3>();

    m.def("dot", &dot);
    m.def("cross", &cross);
    m.def("norm", &norm);
    m.def("distance", &distance);

    py::class_<AxisAlignedBox>(m, "AxisAlignedBox")
        .def(py::init([](const Vec3& lo, const Vec3& hi) { return AxisAlignedBox{lo, hi}; }), py::arg("min"),
             py::arg("max"))
        .def_readwrite("min", &AxisAlignedBox::min)
        .def_readwrite("max", &AxisAlignedBox::max)
        .def("contains", &AxisAlignedBox::contains, py::arg("p"), py::arg("tol") = 0.0)
        .def("diagonal", &AxisAlignedBox::diagonal)
        .def(py::self == py::self);

    py::class_<CircleCrossSection>(m, "CircleCrossSection")
        .def(py::init([](const Vec3& c, double r, const Vec3& n) { return CircleCrossSection{c, r, n}; }),
             py::arg("center"), py::arg("radius"), py::arg("normal"))
        .def_readonly("center", &CircleCrossSection::center)
        .def_readonly("radius", &CircleCrossSection::radius)
        .def_readonly("normal", &CircleCrossSection::normal);

    py::class_<SphereCenterCandidates>(m, "SphereCenterCandidates")
        .def_readonly("plus", &SphereCenterCandidates::plus)
        .def_readonly("minus", &SphereCenterCandidates::minus)
        .def_readonly("offset", &SphereCenterCandidates::offset);

    m.def("triangle_area", &triangle_area);
    m.def("tetrahedron_volume", &tetrahedron_volume);
    m.def("is_collinear", &is_collinear);
    m.def("is_coplanar", &is_coplanar);
    m.def("circumcircle_vector_method", &circumcircle_vector_method);
    m.def("circumcircle_bisector_method", &circumcircle_bisector_method);
    m.def("sphere_centers_from_circle", &sphere_centers_from_circle, py::arg("circle"), py::arg("comm_range"));
    m.def("solve_sphere_from_four_points", &solve_sphere_from_four_points);

    py::enum_<BeaconKind>(m, "BeaconKind").value("entry", BeaconKind::entry).value("exit", BeaconKind::exit);
    py::enum_<LocalizerMethod>(m, "LocalizerMethod")
        .value("three_beacon", LocalizerMethod::three_beacon)
        .value("four_beacon_chord", LocalizerMethod::four_beacon_chord)
        .value("four_beacon_algebraic", LocalizerMethod::four_beacon_algebraic);
    py::enum_<Ambiguity>(m, "Ambiguity")
        .value("unique", Ambiguity::unique)
        .value("disambiguated_by_witness", Ambiguity::disambiguated_by_witness)
        .value("disambiguated_by_bounds", Ambiguity::disambiguated_by_bounds)
        .value("unresolved", Ambiguity::unresolved);
    py::enum_<MobilityModel>(m, "MobilityModel")
        .value("waypoint", MobilityModel::waypoint)
        .value("direction", MobilityModel::direction);
    py::enum_<Preset>(m, "Preset").value("desk", Preset::desk).value("paper", Preset::paper);

    py::class_<BeaconMessage>(m, "BeaconMessage")
        .def(py::init([](AnchorId id, const Vec3& p, double t) { return BeaconMessage{id, p, t}; }),
             py::arg("anchor_id"), py::arg("position"), py::arg("timestamp"))
        .def_readwrite("anchor_id", &BeaconMessage::anchor_id)
        .def_readwrite("position", &BeaconMessage::position)
        .def_readwrite("timestamp", &BeaconMessage::timestamp);

    py::class_<BeaconPoint>(m, "BeaconPoint")
        .def(py::init([](AnchorId id, const Vec3& p, double t, BeaconKind k) { return BeaconPoint{id, p, t, k}; }),
             py::arg("anchor_id"), py::arg("position"), py::arg("logged_at") = 0.0,
             py::arg("kind") = BeaconKind::entry)
        .def_readwrite("anchor_id", &BeaconPoint::anchor_id)
        .def_readwrite("position", &BeaconPoint::position)
        .def_readwrite("logged_at", &BeaconPoint::logged_at)
        .def_readwrite("kind", &BeaconPoint::kind);

    py::class_<VisitorList::Entry>(m, "VisitorEntry")
        .def_readonly("last_position", &VisitorList::Entry::last_position)
        .def_readonly("last_heard", &VisitorList::Entry::last_heard)
        .def_readonly("first_heard", &VisitorList::Entry::first_heard)
        .def_readonly("expiry", &VisitorList::Entry::expiry);

    py::class_<VisitorList>(m, "VisitorList")
        .def(py::init<>())
        .def("process_beacon", &VisitorList::process_beacon, py::arg("msg"), py::arg("lifetime"))
        .def("expire_visitors", &VisitorList::expire_visitors, py::arg("now"))
        .def("__contains__", &VisitorList::contains)
        .def("__len__", &VisitorList::size)
        .def("entry", [](const VisitorList& v, AnchorId id) -> std::optional<VisitorList::Entry> {
            if (const auto* e = v.find(id)) return *e;
            return std::nullopt;
        });

    py::class_<LocalizationEstimate>(m, "LocalizationEstimate")
        .def_readonly("node_id", &LocalizationEstimate::node_id)
        .def_readonly("position", &LocalizationEstimate::position)
        .def_readonly("method", &LocalizationEstimate::method)
        .def_readonly("beacons_used", &LocalizationEstimate::beacons_used)
        .def_readonly("fixed_at", &LocalizationEstimate::fixed_at)
        .def_readonly("ambiguity", &LocalizationEstimate::ambiguity);

    m.def(
        "try_localize_three",
        [](const std::vector<BeaconPoint>& points, double comm_range, const AxisAlignedBox& field,
           const std::vector<Point3>& witnesses) { return try_localize_three(points, comm_range, field, witnesses); },
        py::arg("points"), py::arg("comm_range"), py::arg("field"), py::arg("witnesses") = std::vector<Point3>{});
    m.def(
        "localize_four_chord",
        [](const std::vector<BeaconPoint>& points, double min_angle_deg) {
            return localize_four_chord(points, min_angle_deg);
        },
        py::arg("points"), py::arg("min_angle_deg") = kDefaultChordMinAngleDeg);
    m.def(
        "localize_four_algebraic", [](const std::vector<BeaconPoint>& points) { return localize_four_algebraic(points); },
        py::arg("points"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("field", &ScenarioConfig::field)
        .def_readwrite("n_static", &ScenarioConfig::n_static)
        .def_readwrite("anchor_pct", &ScenarioConfig::anchor_pct)
        .def_readwrite("comm_range", &ScenarioConfig::comm_range)
        .def_readwrite("beacon_interval", &ScenarioConfig::beacon_interval)
        .def_readwrite("lifetime_factor", &ScenarioConfig::lifetime_factor)
        .def_readwrite("mobility", &ScenarioConfig::mobility)
        .def_readwrite("anchor_speed", &ScenarioConfig::anchor_speed)
        .def_readwrite("method", &ScenarioConfig::method)
        .def_readwrite("max_time", &ScenarioConfig::max_time)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("chord_min_angle_deg", &ScenarioConfig::chord_min_angle_deg)
        .def_readwrite("exact_beacon_points", &ScenarioConfig::exact_beacon_points)
        .def("anchor_count", &ScenarioConfig::anchor_count)
        .def("validate", &ScenarioConfig::validate)
        .def(py::self == py::self);

    m.def("preset_config", &preset_config);
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("source") = "<string>",
          py::arg("preset") = Preset::desk);
    m.def("format_scenario", &format_scenario);

    py::class_<NodeRecord>(m, "NodeRecord")
        .def_readonly("node_id", &NodeRecord::node_id)
        .def_readonly("truth", &NodeRecord::truth)
        .def_readonly("estimate", &NodeRecord::estimate)
        .def("error", &NodeRecord::error);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("method", &MetricsReport::method)
        .def_readonly("anchor_pct", &MetricsReport::anchor_pct)
        .def_readonly("seed", &MetricsReport::seed)
        .def_readonly("n_anchors", &MetricsReport::n_anchors)
        .def_readonly("ale", &MetricsReport::ale)
        .def_readonly("ale_defined", &MetricsReport::ale_defined)
        .def_readonly("alt", &MetricsReport::alt)
        .def_readonly("beacon_overhead", &MetricsReport::beacon_overhead)
        .def_readonly("localized_fraction", &MetricsReport::localized_fraction)
        .def_readonly("simulated_time", &MetricsReport::simulated_time)
        .def_readonly("overhead_at_90", &MetricsReport::overhead_at_90)
        .def_readonly("reached_90", &MetricsReport::reached_90)
        .def_readonly("total_broadcasts", &MetricsReport::total_broadcasts)
        .def_readonly("localized_nodes", &MetricsReport::localized_nodes)
        .def_readonly("nodes", &MetricsReport::nodes)
        .def("summary_row", [](const MetricsReport& r) { return summary_row(r); });

    m.def("run_scenario", &run_scenario, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "compute_ale",
        [](const std::vector<std::pair<NodeId, Point3>>& estimates,
           const std::vector<Point3>& truths) -> std::optional<double> {
            std::vector<LocalizationEstimate> ests;
            for (const auto& [id, p] : estimates) {
                LocalizationEstimate e;
                e.node_id = id;
                e.position = p;
                ests.push_back(e);
            }
            const auto r = compute_ale(ests, truths);
            if (r.empty) return std::nullopt;
            return r.value;
        },
        py::arg("estimates"), py::arg("truths"),
        "Mean error over (node_id, position) estimates; None when there are none.");
}
