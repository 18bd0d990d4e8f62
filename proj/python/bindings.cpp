#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "critwave/blowup.hpp"
#include "critwave/config.hpp"
#include "critwave/core.hpp"
#include "critwave/energy.hpp"
#include "critwave/inequalities.hpp"
#include "critwave/solver.hpp"
#include "critwave/weight.hpp"

namespace py = pybind11;
using namespace critwave;

namespace {

RadialProfile make_profile(const std::string& shape, double amplitude, double radius) {
    return RadialProfile{profile_shape_from_string(shape), amplitude, radius};
}

py::dict outcome_to_dict(const SimOutcome& out) {
    py::dict d;
    d["status"] = to_string(out.status);
    d["final_time"] = out.final_time;
    std::vector<double> t, sup_u, l2_u, energy, e_w, v_w, support;
    for (const TimeRecord& r : out.time_series) {
        t.push_back(r.t);
        sup_u.push_back(r.sup_u);
        l2_u.push_back(r.l2_u);
        energy.push_back(r.energy);
        e_w.push_back(r.e_w);
        v_w.push_back(r.v_w);
        support.push_back(r.support_radius);
    }
    d["t"] = t;
    d["sup_u"] = sup_u;
    d["l2_u"] = l2_u;
    d["energy"] = energy;
    d["weighted_energy"] = e_w;
    d["weighted_mass"] = v_w;
    d["support_radius"] = support;
    if (out.lifespan) {
        py::dict ls;
        ls["estimate"] = out.lifespan->estimate;
        ls["lo"] = out.lifespan->lo;
        ls["hi"] = out.lifespan->hi;
        ls["crossing"] = out.lifespan->crossing;
        d["lifespan"] = ls;
    } else {
        d["lifespan"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical laboratory for the damped semilinear wave equation";

    py::class_<DampingSpec>(m, "DampingSpec")
        .def(py::init([](double a0, double alpha, double beta) {
                 return DampingSpec{a0, alpha, beta};
             }),
             py::arg("a0") = 1.0, py::arg("alpha") = -1.0, py::arg("beta") = 0.0)
        .def_readwrite("a0", &DampingSpec::a0)
        .def_readwrite("alpha", &DampingSpec::alpha)
        .def_readwrite("beta", &DampingSpec::beta)
        .def("coefficient", &DampingSpec::coefficient, py::arg("t"), py::arg("r"))
        .def("__repr__", [](const DampingSpec& s) {
            return "DampingSpec(a0=" + std::to_string(s.a0) + ", alpha=" + std::to_string(s.alpha) +
                   ", beta=" + std::to_string(s.beta) + ")";
        });

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](int dim, double p, double epsilon, double support_radius,
                         const std::string& u0_shape, double u0_amplitude,
                         const std::string& u1_shape, double u1_amplitude) {
                 ProblemSpec prob;
                 prob.dim = dim;
                 prob.p = p;
                 prob.epsilon = epsilon;
                 prob.support_radius = support_radius;
                 prob.u0 = make_profile(u0_shape, u0_amplitude, support_radius);
                 prob.u1 = make_profile(u1_shape, u1_amplitude, support_radius);
                 return prob;
             }),
             py::arg("dim") = 1, py::arg("p") = 2.0, py::arg("epsilon") = 0.1,
             py::arg("support_radius") = 1.0, py::arg("u0_shape") = "bump",
             py::arg("u0_amplitude") = 1.0, py::arg("u1_shape") = "bump",
             py::arg("u1_amplitude") = 1.0)
        .def_readwrite("dim", &ProblemSpec::dim)
        .def_readwrite("p", &ProblemSpec::p)
        .def_readwrite("epsilon", &ProblemSpec::epsilon)
        .def_readwrite("support_radius", &ProblemSpec::support_radius);

    py::class_<WeightFunction>(m, "WeightFunction")
        .def("value", &WeightFunction::value, py::arg("t"), py::arg("r"))
        .def("dt", &WeightFunction::dt, py::arg("t"), py::arg("r"))
        .def("dr", &WeightFunction::dr, py::arg("t"), py::arg("r"))
        .def("laplacian", &WeightFunction::laplacian, py::arg("t"), py::arg("r"))
        .def("value_scaled", &WeightFunction::value_scaled, py::arg("b"), py::arg("t"),
             py::arg("r"))
        .def("params", [](const WeightFunction& w) {
            const WeightParams& p = w.params();
            py::dict d;
            d["R_delta"] = p.R_delta;
            d["A0"] = p.A0;
            d["mu"] = p.mu;
            d["delta"] = p.delta;
            d["delta0"] = p.delta0;
            d["t0"] = p.t0;
            return d;
        });

    m.def("critical_exponent", &critical_exponent, py::arg("dim"), py::arg("alpha"));

    m.def(
        "lifespan_exponent",
        [](const DampingSpec& spec, const ProblemSpec& prob) {
            const LifespanExponent le = lifespan_exponent(spec, prob);
            return py::make_tuple(
                le.kind == LifespanClass::Subcritical ? "subcritical" : "critical", le.value);
        },
        py::arg("damping"), py::arg("problem"));

    m.def(
        "damping_coefficient",
        [](double a0, double alpha, double beta, double t, double r) {
            return damping_coefficient(DampingSpec{a0, alpha, beta}, t, r);
        },
        py::arg("a0"), py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("r"));

    m.def("initial_mass_functional", &initial_mass_functional, py::arg("damping"),
          py::arg("problem"), py::arg("n_nodes") = 8193);

    m.def(
        "calibrate_weight",
        [](const DampingSpec& spec, int dim, double delta0, double r_max, double t_max) {
            CalibrationResult res =
                calibrate_weight(spec, dim, delta0, CalibrationGrid::standard(r_max, t_max));
            py::dict d;
            d["weight"] = py::cast(std::move(res.weight));
            d["min_margin_damping"] = res.margins.min_margin_damping;
            d["min_margin_laplacian"] = res.margins.min_margin_laplacian;
            d["min_bracket"] = res.margins.min_bracket;
            return d;
        },
        py::arg("damping"), py::arg("dim"), py::arg("delta0") = 0.25, py::arg("r_max") = 100.0,
        py::arg("t_max") = 100.0);

    m.def(
        "simulate",
        [](const DampingSpec& spec, const ProblemSpec& prob, double dr, double t_max, double cfl,
           double record_dt, double blowup_threshold) {
            const RadialGrid grid =
                RadialGrid::for_horizon(prob.dim, dr, prob.support_radius, t_max);
            RunControls rc;
            rc.t_max = t_max;
            rc.cfl = cfl;
            rc.record_dt = record_dt;
            rc.blowup_threshold = blowup_threshold;
            return outcome_to_dict(run(spec, prob, grid, rc));
        },
        py::arg("damping"), py::arg("problem"), py::arg("dr") = 1.0 / 128.0,
        py::arg("t_max") = 10.0, py::arg("cfl") = 0.5, py::arg("record_dt") = 0.05,
        py::arg("blowup_threshold") = 1e6);

    m.def(
        "lifespan_sweep",
        [](const DampingSpec& spec, const ProblemSpec& prob, const std::vector<double>& eps,
           double dr, double t_max, int threads) {
            const RadialGrid grid =
                RadialGrid::for_horizon(prob.dim, dr, prob.support_radius, t_max);
            RunControls rc;
            rc.t_max = t_max;
            const SweepResult res = lifespan_sweep(spec, prob, eps, grid, rc, threads);
            py::dict d;
            d["kind"] = res.kind == LifespanClass::Subcritical ? "subcritical" : "critical";
            d["fitted_slope"] = res.fitted_slope;
            d["target_slope"] = res.target_slope;
            d["rel_err"] = res.rel_err;
            py::list points;
            for (const SweepPoint& pt : res.points) {
                py::dict q;
                q["eps"] = pt.eps;
                q["status"] = to_string(pt.status);
                q["T_lo"] = pt.t_lo;
                q["T_hi"] = pt.t_hi;
                q["used_in_fit"] = pt.used_in_fit;
                points.append(q);
            }
            d["points"] = points;
            return d;
        },
        py::arg("damping"), py::arg("problem"), py::arg("eps"), py::arg("dr") = 1.0 / 64.0,
        py::arg("t_max") = 200.0, py::arg("threads") = 0);

    m.def("fit_power_slope", &fit_power_slope, py::arg("eps"), py::arg("lifespan"));
    m.def("fit_loglog_slope", &fit_loglog_slope, py::arg("eps"), py::arg("lifespan"));

    m.def(
        "corpus_summary",
        [](int dim, int count, std::uint64_t seed, double p) {
            const TestFunctionCorpus corpus = make_corpus(dim, count, seed);
            double sup_k1 = 0, sup_k2 = 0, sup_k3 = 0, sup_gn = 0, worst = 0;
            for (const CorpusEntry& e : corpus.entries) {
                sup_k1 = std::max(sup_k1, ckn_ratio(e, 1));
                sup_k2 = std::max(sup_k2, ckn_ratio(e, 2));
                sup_k3 = std::max(sup_k3, ckn_ratio(e, 3));
                sup_gn = std::max(sup_gn, gn_ratio(e, p));
                worst = std::max(worst, gamma_step_identity_residual(e, 0.0));
            }
            py::dict d;
            d["sup_ckn_k1"] = sup_k1;
            d["sup_ckn_k2"] = sup_k2;
            d["sup_ckn_k3"] = sup_k3;
            d["sup_gn"] = sup_gn;
            d["max_ibp_residual"] = worst;
            return d;
        },
        py::arg("dim"), py::arg("count") = 100, py::arg("seed") = 12345, py::arg("p") = 2.0);
}
