#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chemfront/analysis.hpp"
#include "chemfront/config.hpp"
#include "chemfront/harness.hpp"
#include "chemfront/initial_data.hpp"
#include "chemfront/params.hpp"
#include "chemfront/solver.hpp"
#include "chemfront/theory.hpp"

namespace py = pybind11;
using namespace chemfront;
namespace th = chemfront::theory;

namespace {

py::array_t<double> field_to_numpy(const Field& f) {
    std::vector<py::ssize_t> shape;
    for (int a = 0; a < f.grid.dim; ++a) shape.push_back(f.grid.n[a]);
    py::array_t<double> out(shape);
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

void numpy_into_field(Field& f, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (static_cast<std::size_t>(a.size()) != f.size())
        throw std::invalid_argument("array size does not match the grid");
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "chemotaxis front laboratory (C++ core)";

    py::class_<Params>(m, "Params")
        .def(py::init([](double chi, double a, double b, double lam, double mu, int dim) {
                 Params p{chi, a, b, lam, mu, dim};
                 p.validate();
                 return p;
             }),
             py::arg("chi") = 0.0, py::arg("a") = 1.0, py::arg("b") = 1.0,
             py::arg("lam") = 1.0, py::arg("mu") = 1.0, py::arg("dim") = 1)
        .def_readwrite("chi", &Params::chi)
        .def_readwrite("a", &Params::a)
        .def_readwrite("b", &Params::b)
        .def_readwrite("lam", &Params::lambda)
        .def_readwrite("mu", &Params::mu)
        .def_readwrite("dim", &Params::dim)
        .def("__repr__", [](const Params& p) {
            return "Params(chi=" + std::to_string(p.chi) + ", a=" + std::to_string(p.a) +
                   ", b=" + std::to_string(p.b) + ", lam=" + std::to_string(p.lambda) +
                   ", mu=" + std::to_string(p.mu) + ", dim=" + std::to_string(p.dim) + ")";
        });

    m.def("damping_condition", &damping_condition, py::arg("params"),
          "True iff b > dim*mu*chi/4 (strict).");
    m.def("steady_state", &steady_state, py::arg("params"),
          "The positive homogeneous steady state (a/b, mu*a/(lambda*b)).");
    m.def("fisher_kpp_mode", &fisher_kpp_mode, py::arg("params"),
          "Copy of params with the chemotaxis switched off.");

    py::enum_<Boundary>(m, "Boundary")
        .value("neumann", Boundary::Neumann)
        .value("periodic", Boundary::Periodic);

    py::class_<Grid>(m, "Grid")
        .def_static("line", &Grid::line, py::arg("lo"), py::arg("hi"), py::arg("n"),
                    py::arg("boundary") = Boundary::Neumann)
        .def_static("box", &Grid::box, py::arg("dim"), py::arg("lo"), py::arg("hi"),
                    py::arg("n"), py::arg("boundary") = Boundary::Neumann)
        .def_readonly("dim", &Grid::dim)
        .def("dx", &Grid::dx)
        .def("coord", &Grid::coord)
        .def("size", &Grid::size);

    py::class_<Field>(m, "Field")
        .def(py::init<const Grid&, double>(), py::arg("grid"), py::arg("fill") = 0.0)
        .def_readonly("grid", &Field::grid)
        .def("numpy", &field_to_numpy)
        .def("set", &numpy_into_field)
        .def("max", &Field::max)
        .def("min", &Field::min);

    py::class_<State>(m, "State")
        .def(py::init<>())
        .def_readwrite("u", &State::u)
        .def_readwrite("v", &State::v)
        .def_readwrite("t", &State::t);

    // closed-form constants
    m.def("kpp_speed", &th::kpp_speed, py::arg("a"));
    m.def("envelope_speed", &th::envelope_speed, py::arg("k"), py::arg("a"));
    m.def("reduced_growth_rate", &th::reduced_growth_rate, py::arg("eps"), py::arg("a"));
    m.def("eigen_box_halfwidth", &th::eigen_box_halfwidth, py::arg("eps"), py::arg("a"),
          py::arg("dim"));
    m.def("principal_eigenvalue", &th::principal_eigenvalue, py::arg("c"), py::arg("abar"),
          py::arg("eps"), py::arg("a"), py::arg("dim"));
    m.def("eigenvalue_floor", &th::eigenvalue_floor, py::arg("eps"), py::arg("a"));
    m.def("principal_eigenfunction", &th::principal_eigenfunction, py::arg("x"), py::arg("xi"),
          py::arg("c"), py::arg("eps"), py::arg("a"), py::arg("dim"));
    m.def("persistence_time", &th::persistence_time, py::arg("eta"), py::arg("bound"),
          py::arg("lam"));
    m.def("persistence_radius", &th::persistence_radius, py::arg("eta"), py::arg("T"),
          py::arg("a"), py::arg("dim"), py::arg("ell"));
    m.def("gaussian_tail", &th::gaussian_tail, py::arg("dim"), py::arg("r"), py::arg("moment"));
    m.def("chemical_response_bound", &th::chemical_response_bound, py::arg("bound"),
          py::arg("lam"), py::arg("mu"), py::arg("dim"));
    m.def("envelope_v_amplitude", &th::envelope_v_amplitude, py::arg("bound"), py::arg("a"),
          py::arg("mu"), py::arg("lam"));

    py::enum_<DtPolicy>(m, "DtPolicy")
        .value("fixed", DtPolicy::Fixed)
        .value("adaptive_cfl", DtPolicy::AdaptiveCfl);
    py::enum_<FluxScheme>(m, "FluxScheme")
        .value("central", FluxScheme::CentralConservative)
        .value("upwind", FluxScheme::UpwindConservative);
    py::enum_<DiffusionIntegrator>(m, "DiffusionIntegrator")
        .value("backward_euler", DiffusionIntegrator::BackwardEuler)
        .value("crank_nicolson", DiffusionIntegrator::CrankNicolson);

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SchemeConfig::dt)
        .def_readwrite("dt_policy", &SchemeConfig::dt_policy)
        .def_readwrite("safety", &SchemeConfig::safety)
        .def_readwrite("flux", &SchemeConfig::flux)
        .def_readwrite("diffusion", &SchemeConfig::diffusion)
        .def_readwrite("frame_speed", &SchemeConfig::frame_speed)
        .def_readwrite("frame_direction", &SchemeConfig::frame_direction);

    py::enum_<InitialDataKind>(m, "InitialDataKind")
        .value("compact_bump", InitialDataKind::CompactBump)
        .value("front_like", InitialDataKind::FrontLike)
        .value("two_sided", InitialDataKind::TwoSided)
        .value("custom", InitialDataKind::Custom);

    py::class_<InitialDataSpec>(m, "InitialDataSpec")
        .def(py::init<>())
        .def_readwrite("kind", &InitialDataSpec::kind)
        .def_readwrite("amplitude", &InitialDataSpec::amplitude)
        .def_readwrite("v_amplitude", &InitialDataSpec::v_amplitude)
        .def_readwrite("radius", &InitialDataSpec::radius)
        .def_readwrite("interface_pos", &InitialDataSpec::interface_pos)
        .def_readwrite("width", &InitialDataSpec::width)
        .def_readwrite("direction", &InitialDataSpec::direction);

    m.def("build_initial", &build_initial, py::arg("spec"), py::arg("grid"),
          py::arg("clearance_fraction") = 0.1);

    m.def("rhs_u", &rhs_u);
    m.def("rhs_v", &rhs_v);
    m.def(
        "step",
        [](State& s, const Params& p, const SchemeConfig& sc, double dt_cap) {
            const StepReport rep = step(s, p, sc, dt_cap);
            py::dict d;
            d["dt"] = rep.dt;
            d["max_u"] = rep.max_u;
            d["max_v"] = rep.max_v;
            d["max_grad_v"] = rep.max_grad_v;
            d["cfl_advective"] = rep.cfl_advective;
            d["cfl_chemotactic"] = rep.cfl_chemotactic;
            d["clip_count"] = rep.clip_count;
            return d;
        },
        py::arg("state"), py::arg("params"), py::arg("scheme"),
        py::arg("dt_cap") = std::numeric_limits<double>::infinity());

    py::class_<FrontTrace>(m, "FrontTrace")
        .def_readonly("threshold", &FrontTrace::threshold)
        .def_readonly("direction", &FrontTrace::direction)
        .def_readonly("times", &FrontTrace::times)
        .def_readonly("positions", &FrontTrace::positions);

    py::class_<SpeedFit>(m, "SpeedFit")
        .def_readonly("speed", &SpeedFit::speed)
        .def_readonly("intercept", &SpeedFit::intercept)
        .def_readonly("residual_rms", &SpeedFit::residual_rms)
        .def_readonly("count", &SpeedFit::count);

    m.def("front_position", &front_position, py::arg("u"), py::arg("threshold"),
          py::arg("direction") = +1);
    m.def("front_position_radial", &front_position_radial);
    m.def("fit_speed", &fit_speed, py::arg("trace"), py::arg("window_fraction") = 0.5);
    m.def("w_functional", &w_functional);
    m.def("heat_convolve", &heat_convolve);

    m.def(
        "simulate",
        [](const Params& p, const SchemeConfig& sc, const InitialDataSpec& spec, const Grid& g,
           double horizon, double cadence, std::vector<double> thresholds) {
            ObserverConfig obs;
            obs.cadence = cadence;
            obs.thresholds = std::move(thresholds);
            RunRecord rec = run(build_initial(spec, g), p, sc, horizon, obs);
            if (rec.termination.reason != Termination::Reason::Completed)
                throw std::runtime_error("numerical failure at t=" +
                                         std::to_string(rec.termination.t) + ": " +
                                         rec.termination.message);
            py::dict d;
            d["steps"] = rec.steps;
            d["traces"] = rec.traces;
            py::list stats;
            for (const auto& s : rec.snapshots) {
                py::dict sj;
                sj["t"] = s.t;
                sj["u_max"] = s.u_max;
                sj["u_min"] = s.u_min;
                sj["v_max"] = s.v_max;
                sj["u_mass"] = s.u_mass;
                stats.append(sj);
            }
            d["snapshots"] = stats;
            return d;
        },
        py::arg("params"), py::arg("scheme"), py::arg("initial"), py::arg("grid"),
        py::arg("horizon"), py::arg("cadence") = 0.5,
        py::arg("thresholds") = std::vector<double>{0.5},
        "Run the solver and return front traces plus summary statistics.");
}
