#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbvp/config.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/galerkin.hpp"
#include "fracbvp/harness.hpp"
#include "fracbvp/petrov.hpp"
#include "fracbvp/special.hpp"

namespace py = pybind11;
using namespace fracbvp;
using nlohmann::json;

namespace {

json as_json(const py::object& obj) {
    std::string s;
    if (py::isinstance<py::str>(obj)) {
        s = obj.cast<std::string>();
    } else {
        const py::module_ jmod = py::module_::import("json");
        s = jmod.attr("dumps")(obj).cast<std::string>();
    }
    return json::parse(s);
}

PowerTermSum poly_from(const std::vector<double>& coeffs) {
    return PowerTermSum::from_polynomial(Polynomial(coeffs));
}

std::shared_ptr<const FemSpace> space_of(const ProblemConfig& cfg) {
    return std::make_shared<const FemSpace>(make_partition(cfg.mesh));
}

py::dict wellposedness_dict(const WellposednessReport& rep) {
    py::dict d;
    d["xi"] = rep.xi;
    d["xi_alt"] = rep.xi_alt;
    d["xi_forms_discrepancy"] = rep.discrepancy;
    d["u_l_norm"] = rep.u_l_norm;
    d["u_r_norm"] = rep.u_r_norm;
    d["perturbation_residual"] = rep.perturbation_residual;
    switch (rep.verdict) {
        case WellposednessVerdict::Wellposed:
            d["verdict"] = "wellposed";
            break;
        case WellposednessVerdict::Violated:
            d["verdict"] = "violated";
            break;
        case WellposednessVerdict::Inconclusive:
            d["verdict"] = "inconclusive";
            break;
    }
    return d;
}

py::dict solve_config(const py::object& config) {
    const ProblemConfig cfg = parse_config_json(as_json(config));
    auto space = space_of(cfg);
    py::dict out;
    GridFunction u = GridFunction::zero(space);
    switch (cfg.method) {
        case Method::Petrov: {
            const WellposednessReport wp = wellposedness_indicator(
                cfg.K, cfg.beta, cfg.theta, space, cfg.tol.xi, cfg.tol.xi_inconclusive);
            out["wellposedness"] = wellposedness_dict(wp);
            u = pg_solve(assemble_pg(space, space, cfg.K, cfg.beta, cfg.theta, &cfg.f)).u;
            break;
        }
        case Method::Galerkin:
            u = galerkin_solve(assemble_galerkin(space, cfg.K, cfg.beta, cfg.theta, cfg.f)).u;
            break;
        case Method::Characterization: {
            const CharacterizationSolve cs =
                solve_via_characterization(cfg.K, cfg.beta, cfg.theta, cfg.f, space);
            u = cs.u;
            out["c_l"] = cs.c_l;
            out["c_r"] = cs.c_r;
            out["integral_equation_residual_sup"] = cs.residual_sup;
            break;
        }
    }
    const PowerTermSum iu = two_sided_integral(u.to_piecewise_poly(), cfg.beta, cfg.theta);
    std::vector<double> xs, us, ius;
    for (int k = 0; k <= 200; ++k) {
        const double x = static_cast<double>(k) / 200.0;
        xs.push_back(x);
        us.push_back(u(x));
        ius.push_back(iu(x));
    }
    out["x"] = xs;
    out["u"] = us;
    out["Iu"] = ius;
    out["l2_norm"] = u.l2_norm();
    out["coefficients"] = u.coefficients();
    return out;
}

py::dict wellposed_config(const py::object& config) {
    const ProblemConfig cfg = parse_config_json(as_json(config));
    if (cfg.beta >= 0.5)
        throw std::invalid_argument("the wellposedness machinery requires beta < 1/2");
    const WellposednessReport rep = wellposedness_indicator(
        cfg.K, cfg.beta, cfg.theta, space_of(cfg), cfg.tol.xi, cfg.tol.xi_inconclusive);
    return wellposedness_dict(rep);
}

py::list converge_config(const py::object& config) {
    const ProblemConfig cfg = parse_config_json(as_json(config));
    ConvergenceTable table;
    if (cfg.u_exact) {
        const ManufacturedCase mc{*cfg.u_exact, cfg.K, cfg.beta, cfg.theta, cfg.f};
        table = convergence_study(mc, cfg.method, cfg.n_list);
    } else {
        table = convergence_study_vs_reference(cfg.K, cfg.f, cfg.beta, cfg.theta, cfg.method,
                                               cfg.n_list);
    }
    py::list rows;
    for (const ConvergenceRow& r : table.rows) {
        py::dict d;
        d["n"] = r.n;
        d["h"] = r.h;
        d["err_l2"] = r.err_l2;
        d["err_energy"] = r.err_energy;
        d["order_l2"] = r.order_l2;
        d["order_energy"] = r.order_energy;
        d["ok"] = r.ok;
        if (!r.note.empty()) d["note"] = r.note;
        rows.append(std::move(d));
    }
    return rows;
}

py::dict counterexample(double beta, double theta) {
    const CoercivityCertificate cert = find_coercivity_violation(beta, theta);
    py::dict d;
    d["beta"] = cert.beta;
    d["theta"] = cert.theta;
    d["delta"] = cert.delta;
    d["K_l"] = cert.K_l;
    d["K_r"] = cert.K_r;
    d["B_ww"] = cert.value;
    d["profile_at_corner"] = cert.profile_at_corner;
    d["shrink_steps"] = cert.shrink_steps;
    d["K_breaks"] = cert.K.breakpoints();
    return d;
}

py::list run_identity_suite(double gamma_perturbation, unsigned seed) {
    IdentitySuiteOptions opt;
    opt.gamma_perturbation = gamma_perturbation;
    opt.seed = seed;
    const IdentityReport rep = identity_suite(opt);
    py::list out;
    for (const IdentityCheck& c : rep.checks) {
        py::dict d;
        d["name"] = c.name;
        d["defect"] = c.defect;
        d["tolerance"] = c.tolerance;
        d["pass"] = c.pass;
        out.append(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-sided variable-coefficient conservative fractional diffusion solver";

    m.def("gamma", &gamma_fn, py::arg("x"), "Gamma function for x > 0");
    m.def("lambda_beta", &lambda_beta, py::arg("beta"),
          "2^(1+beta) - 1 - 3^beta; positive strictly inside (0,1)");

    m.def(
        "left_frac_integral",
        [](const std::vector<double>& coeffs, double sigma, double x) {
            return left_frac_integral_at(poly_from(coeffs), sigma, x);
        },
        py::arg("poly_coeffs"), py::arg("sigma"), py::arg("x"),
        "Left Riemann-Liouville integral of a polynomial at x");
    m.def(
        "right_frac_integral",
        [](const std::vector<double>& coeffs, double sigma, double x) {
            return right_frac_integral_at(poly_from(coeffs), sigma, x);
        },
        py::arg("poly_coeffs"), py::arg("sigma"), py::arg("x"));
    m.def(
        "two_sided_integral",
        [](const std::vector<double>& coeffs, double beta, double theta, double x) {
            return two_sided_integral_at(poly_from(coeffs), beta, theta, x);
        },
        py::arg("poly_coeffs"), py::arg("beta"), py::arg("theta"), py::arg("x"),
        "theta-weighted combination of the one-sided integrals");

    m.def(
        "perturbation_check",
        [](const py::object& K) {
            return perturbation_check(diffusivity_from_json(as_json(K), "/K"));
        },
        py::arg("K"), "L2 distance of the normalized reciprocal diffusivity from one");
    m.def(
        "one_sided_xi",
        [](const py::object& K, double beta, int theta01) {
            return one_sided_xi_closed_form(diffusivity_from_json(as_json(K), "/K"), beta,
                                            theta01);
        },
        py::arg("K"), py::arg("beta"), py::arg("theta01"),
        "Closed-form wellposedness indicator for theta in {0, 1}");

    m.def("find_coercivity_violation", &counterexample, py::arg("beta"), py::arg("theta"),
          "Three-piece coefficient with B(w,w) < 0 for the hat-shaped witness");
    m.def("identity_suite", &run_identity_suite, py::arg("gamma_perturbation") = 0.0,
          py::arg("seed") = 0u, "Executable operator identities with per-check defects");

    m.def("solve", &solve_config, py::arg("config"),
          "Solve one problem instance from a JSON config (string or dict)");
    m.def("wellposed", &wellposed_config, py::arg("config"),
          "Wellposedness indicator report for a config");
    m.def("converge", &converge_config, py::arg("config"),
          "Refinement study; rows of errors and observed orders");

#ifdef FRACBVP_VERSION_STRING
    m.attr("__version__") = FRACBVP_VERSION_STRING;
#else
    m.attr("__version__") = "dev";
#endif
}
