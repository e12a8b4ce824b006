#include "fracbvp/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracbvp/errors.hpp"

namespace fracbvp {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where, "expected a number");
    return j.get<double>();
}

std::vector<double> require_number_array(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where, "expected a non-empty array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(require_number(j[i], where + "/" + std::to_string(i)));
    return out;
}

PowerTermSum term_sum_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of terms");
    PowerTermSum s;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        const json& t = j[i];
        if (!t.is_object()) throw ConfigError(w, "expected a term object");
        const double coeff = require_number(t.value("coeff", json()), w + "/coeff");
        const std::string side_s = t.value("side", "left");
        Side side;
        if (side_s == "left")
            side = Side::Left;
        else if (side_s == "right")
            side = Side::Right;
        else
            throw ConfigError(w + "/side", "side must be \"left\" or \"right\"");
        const double anchor =
            t.contains("anchor") ? require_number(t["anchor"], w + "/anchor")
                                 : (side == Side::Left ? 0.0 : 1.0);
        const double exponent = require_number(t.value("exponent", json()), w + "/exponent");
        if (exponent <= -1.0) throw ConfigError(w + "/exponent", "exponent must exceed -1");
        if (anchor < 0.0 || anchor > 1.0) throw ConfigError(w + "/anchor", "anchor in [0,1]");
        s.add_term(coeff, side, anchor, exponent);
    }
    s.merge();
    return s;
}

}  // namespace

DiffusivityField diffusivity_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return DiffusivityField::constant(j.get<double>());
    if (!j.is_object()) throw ConfigError(where, "expected a number or an object with \"kind\"");
    const std::string kind = j.value("kind", "");
    try {
        if (kind == "constant")
            return DiffusivityField::constant(require_number(j.value("value", json()), where + "/value"));
        if (kind == "piecewise_constant")
            return DiffusivityField::piecewise_constant(
                require_number_array(j.value("breaks", json()), where + "/breaks"),
                require_number_array(j.value("values", json()), where + "/values"));
        if (kind == "polynomial")
            return DiffusivityField::polynomial(
                require_number_array(j.value("coeffs", json()), where + "/coeffs"));
        if (kind == "tabulated")
            return DiffusivityField::tabulated(
                require_number_array(j.value("nodes", json()), where + "/nodes"),
                require_number_array(j.value("values", json()), where + "/values"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(where, e.what());
    }
    throw ConfigError(where + "/kind",
                      "kind must be constant, piecewise_constant, polynomial or tabulated");
}

json diffusivity_to_json(const DiffusivityField& K) {
    json j;
    switch (K.kind()) {
        case DiffusivityField::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = K(0.5);
            break;
        case DiffusivityField::Kind::PiecewiseConstant: {
            j["kind"] = "piecewise_constant";
            j["breaks"] = K.breakpoints();
            std::vector<double> values;
            double prev = 0.0;
            for (double b : K.breakpoints()) {
                values.push_back(K(0.5 * (prev + b)));
                prev = b;
            }
            values.push_back(K(0.5 * (prev + 1.0)));
            j["values"] = values;
            break;
        }
        case DiffusivityField::Kind::Polynomial:
            j["kind"] = "polynomial";
            j["coeffs"] = K.polynomial_coeffs().coeffs();
            break;
        case DiffusivityField::Kind::Tabulated: {
            j["kind"] = "tabulated";
            std::vector<double> nodes{0.0};
            for (double b : K.breakpoints()) nodes.push_back(b);
            nodes.push_back(1.0);
            std::vector<double> values;
            for (double x : nodes) values.push_back(K(x));
            j["nodes"] = nodes;
            j["values"] = values;
            break;
        }
    }
    return j;
}

json term_sum_to_json(const PowerTermSum& s) {
    json arr = json::array();
    for (const PowerTerm& t : s.terms()) {
        json jt;
        jt["coeff"] = t.coeff;
        jt["side"] = (t.side == Side::Left) ? "left" : "right";
        jt["anchor"] = t.anchor;
        jt["exponent"] = t.exponent;
        arr.push_back(std::move(jt));
    }
    return arr;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Galerkin:
            return "galerkin";
        case Method::Petrov:
            return "petrov";
        case Method::Characterization:
            return "characterization";
    }
    return "petrov";
}

Method method_from_name(const std::string& name, const std::string& where) {
    if (name == "galerkin") return Method::Galerkin;
    if (name == "petrov") return Method::Petrov;
    if (name == "characterization") return Method::Characterization;
    throw ConfigError(where, "method must be galerkin, petrov or characterization");
}

ProblemConfig parse_config_json(const json& j) {
    if (!j.is_object()) throw ConfigError("/", "config must be a JSON object");
    ProblemConfig c;

    if (!j.contains("beta")) throw ConfigError("/beta", "missing");
    c.beta = require_number(j["beta"], "/beta");
    if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("/beta", "beta must lie in (0,1)");

    c.theta = j.contains("theta") ? require_number(j["theta"], "/theta") : 0.5;
    if (!(c.theta >= 0.0 && c.theta <= 1.0)) throw ConfigError("/theta", "theta in [0,1]");

    if (j.contains("K")) c.K = diffusivity_from_json(j["K"], "/K");

    if (j.contains("method"))
        c.method = method_from_name(j["method"].get<std::string>(), "/method");
    if ((c.method == Method::Petrov || c.method == Method::Characterization) && c.beta >= 0.5)
        throw ConfigError("/beta", "the petrov/characterization methods require beta < 1/2");

    if (j.contains("mesh")) {
        const json& m = j["mesh"];
        if (!m.is_object()) throw ConfigError("/mesh", "expected an object");
        if (m.contains("n")) {
            if (!m["n"].is_number_integer() || m["n"].get<int>() < 2)
                throw ConfigError("/mesh/n", "n must be an integer >= 2");
            c.mesh.n = m["n"].get<int>();
        }
        if (m.contains("grading")) {
            const json& g = m["grading"];
            if (g.is_string() && g.get<std::string>() == "uniform") {
                c.mesh.grading = Grading::Uniform;
            } else if (g.is_object()) {
                const std::string kind = g.value("kind", "graded");
                if (kind != "graded") throw ConfigError("/mesh/grading/kind", "unknown grading");
                c.mesh.grading_exponent = require_number(g.value("exponent", json()),
                                                         "/mesh/grading/exponent");
                if (!(c.mesh.grading_exponent >= 1.0))
                    throw ConfigError("/mesh/grading/exponent", "grading exponent >= 1");
                const std::string side = g.value("side", "left");
                if (side == "left")
                    c.mesh.grading = Grading::GradedLeft;
                else if (side == "right")
                    c.mesh.grading = Grading::GradedRight;
                else
                    throw ConfigError("/mesh/grading/side", "side must be left or right");
            } else {
                throw ConfigError("/mesh/grading", "expected \"uniform\" or a graded object");
            }
        }
    }

    if (j.contains("f")) {
        const json& fj = j["f"];
        const std::string where = "/f";
        if (fj.is_number()) {
            c.f = PowerTermSum::constant(fj.get<double>());
        } else if (fj.is_object()) {
            const std::string kind = fj.value("kind", "");
            if (kind == "constant") {
                c.f = PowerTermSum::constant(require_number(fj.value("value", json()), where + "/value"));
            } else if (kind == "polynomial") {
                c.f = PowerTermSum::from_polynomial(
                    Polynomial(require_number_array(fj.value("coeffs", json()), where + "/coeffs")));
            } else if (kind == "term_sum") {
                c.f = term_sum_from_json(fj.value("terms", json()), where + "/terms");
            } else if (kind == "manufactured") {
                if (!fj.contains("u_exact"))
                    throw ConfigError(where + "/u_exact", "manufactured source needs u_exact");
                const json& uj = fj["u_exact"];
                PowerTermSum u;
                if (uj.is_array() && !uj.empty() && uj[0].is_object())
                    u = term_sum_from_json(uj, where + "/u_exact");
                else if (uj.is_array())
                    u = PowerTermSum::from_polynomial(
                        Polynomial(require_number_array(uj, where + "/u_exact")));
                else if (uj.is_object() && uj.value("kind", "") == "polynomial")
                    u = PowerTermSum::from_polynomial(Polynomial(
                        require_number_array(uj.value("coeffs", json()), where + "/u_exact/coeffs")));
                else
                    throw ConfigError(where + "/u_exact",
                                      "expected polynomial coefficients or term objects");
                try {
                    ManufacturedCase mc = manufacture(u, c.K, c.beta, c.theta);
                    c.f = mc.f;
                    c.u_exact = mc.u_exact;
                } catch (const std::exception& e) {
                    throw ConfigError(where + "/u_exact", e.what());
                }
            } else {
                throw ConfigError(where + "/kind",
                                  "kind must be constant, polynomial, term_sum or manufactured");
            }
        } else {
            throw ConfigError(where, "expected a number or an object");
        }
    } else {
        c.f = PowerTermSum::constant(1.0);
    }

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError("/tolerances", "expected an object");
        if (t.contains("xi")) c.tol.xi = require_number(t["xi"], "/tolerances/xi");
        if (t.contains("xi_inconclusive"))
            c.tol.xi_inconclusive = require_number(t["xi_inconclusive"],
                                                   "/tolerances/xi_inconclusive");
    }

    if (j.contains("test_refine")) {
        if (!j["test_refine"].is_number_integer())
            throw ConfigError("/test_refine", "expected an integer");
        c.test_refine = j["test_refine"].get<int>();
        if (c.test_refine != 1 && c.test_refine != 2)
            throw ConfigError("/test_refine", "supported factors: 1 (default) or 2");
    }

    if (j.contains("n_list")) {
        const json& nl = j["n_list"];
        if (!nl.is_array() || nl.size() < 2)
            throw ConfigError("/n_list", "expected an array with at least two entries");
        c.n_list.clear();
        for (std::size_t i = 0; i < nl.size(); ++i) {
            if (!nl[i].is_number_integer() || nl[i].get<int>() < 2)
                throw ConfigError("/n_list/" + std::to_string(i), "entries are integers >= 2");
            c.n_list.push_back(nl[i].get<int>());
        }
    }

    return c;
}

ProblemConfig parse_config_file(const std::string& path, std::string* raw_bytes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    if (raw_bytes) *raw_bytes = bytes;
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
    return parse_config_json(j);
}

json config_echo(const ProblemConfig& c) {
    json j;
    j["beta"] = c.beta;
    j["theta"] = c.theta;
    j["K"] = diffusivity_to_json(c.K);
    j["method"] = method_name(c.method);
    j["mesh"]["n"] = c.mesh.n;
    if (c.mesh.grading == Grading::Uniform) {
        j["mesh"]["grading"] = "uniform";
    } else {
        j["mesh"]["grading"]["kind"] = "graded";
        j["mesh"]["grading"]["exponent"] = c.mesh.grading_exponent;
        j["mesh"]["grading"]["side"] =
            (c.mesh.grading == Grading::GradedLeft) ? "left" : "right";
    }
    if (c.u_exact) {
        // Echo the manufactured description, not the derived source.
        json uj;
        uj["kind"] = "manufactured";
        uj["u_exact"] = term_sum_to_json(*c.u_exact);
        j["f"] = std::move(uj);
    } else {
        json fj;
        fj["kind"] = "term_sum";
        fj["terms"] = term_sum_to_json(c.f);
        j["f"] = std::move(fj);
    }
    j["tolerances"]["xi"] = c.tol.xi;
    j["tolerances"]["xi_inconclusive"] = c.tol.xi_inconclusive;
    j["test_refine"] = c.test_refine;
    j["n_list"] = c.n_list;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}
}  // namespace

void write_solution_csv(const std::string& path, const std::vector<double>& x,
                        const std::vector<double>& u, const std::vector<double>& iu) {
    std::string s = "x,u,Iu\r\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += format_double(x[i]) + "," + format_double(u[i]) + "," + format_double(iu[i]) +
             "\r\n";
    write_file(path, s);
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
    std::string s = "n,h,err_l2,err_energy,order\r\n";
    for (const ConvergenceRow& r : table.rows) {
        s += std::to_string(r.n) + "," + format_double(r.h) + "," + format_double(r.err_l2) +
             "," + format_double(r.err_energy) + "," + format_double(r.order_energy) + "\r\n";
    }
    write_file(path, s);
}

Partition make_partition(const MeshConfig& mesh) {
    if (mesh.grading == Grading::Uniform) return Partition::uniform(mesh.n);
    return Partition::graded(mesh.n, mesh.grading_exponent, mesh.grading);
}

}  // namespace fracbvp
