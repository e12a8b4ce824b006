#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracbvp/config.hpp"
#include "fracbvp/errors.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/galerkin.hpp"
#include "fracbvp/harness.hpp"
#include "fracbvp/petrov.hpp"
#include "fracbvp/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracbvp;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    bool force = false;
    int seed = 0;
    int threads = 0;
};

void apply_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("FRACBVP_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) set_thread_count(threads);
}

json base_report(const ProblemConfig* cfg, const std::string& raw_bytes) {
    json rep;
    rep["tool"] = "fracbvp";
    rep["version"] = kVersion;
    if (cfg) rep["config"] = config_echo(*cfg);
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(raw_bytes)));
    rep["input_hash"] = std::string(hex);
    return rep;
}

void write_report(const json& rep, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << rep.dump(2) << "\n";
}

int config_failure(const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
}

json wellposedness_to_json(const WellposednessReport& rep) {
    json j;
    j["xi"] = rep.xi;
    j["xi_alt"] = rep.xi_alt;
    j["xi_forms_discrepancy"] = rep.discrepancy;
    j["u_l_norm"] = rep.u_l_norm;
    j["u_r_norm"] = rep.u_r_norm;
    j["perturbation_residual"] = rep.perturbation_residual;
    j["tolerance"] = rep.tol;
    j["tolerance_inconclusive"] = rep.tol_inconclusive;
    switch (rep.verdict) {
        case WellposednessVerdict::Wellposed:
            j["verdict"] = "wellposed";
            break;
        case WellposednessVerdict::Violated:
            j["verdict"] = "violated";
            break;
        case WellposednessVerdict::Inconclusive:
            j["verdict"] = "inconclusive";
            break;
    }
    return j;
}

int cmd_verify(const CommonArgs& args, double gamma_fault) {
    std::string raw;
    ProblemConfig cfg;
    try {
        cfg = parse_config_file(args.config_path, &raw);
    } catch (const std::exception& e) {
        return config_failure(e);
    }
    const auto t0 = std::chrono::steady_clock::now();
    IdentitySuiteOptions opt;
    opt.gamma_perturbation = gamma_fault;
    opt.seed = static_cast<unsigned>(args.seed);
    const IdentityReport rep = identity_suite(opt);

    json out = base_report(&cfg, raw);
    out["command"] = "verify";
    json checks = json::array();
    for (const IdentityCheck& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["defect"] = c.defect;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    out["all_pass"] = rep.all_pass();
    out["failures"] = rep.failures();
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    write_report(out, fs::path(args.out_dir) / "verify_report.json");

    for (const IdentityCheck& c : rep.checks)
        std::cout << (c.pass ? "pass " : "FAIL ") << c.name << "  defect=" << c.defect
                  << "  tol=" << c.tolerance << "\n";
    return rep.all_pass() ? 0 : 1;
}

int cmd_solve(const CommonArgs& args) {
    std::string raw;
    ProblemConfig cfg;
    try {
        cfg = parse_config_file(args.config_path, &raw);
    } catch (const std::exception& e) {
        return config_failure(e);
    }
    const auto t0 = std::chrono::steady_clock::now();
    json out = base_report(&cfg, raw);
    out["command"] = "solve";
    out["method"] = method_name(cfg.method);

    auto space = std::make_shared<const FemSpace>(make_partition(cfg.mesh));
    GridFunction u = GridFunction::zero(space);
    try {
        switch (cfg.method) {
            case Method::Petrov: {
                const WellposednessReport wp = wellposedness_indicator(
                    cfg.K, cfg.beta, cfg.theta, space, cfg.tol.xi, cfg.tol.xi_inconclusive);
                out["wellposedness"] = wellposedness_to_json(wp);
                if (wp.verdict == WellposednessVerdict::Violated && !args.force) {
                    out["refused"] = "wellposedness condition violated; rerun with --force";
                    write_report(out, fs::path(args.out_dir) / "solve_report.json");
                    std::cerr << "refusing to solve: wellposedness indicator "
                              << wp.xi << " below tolerance (use --force)\n";
                    return 1;
                }
                std::shared_ptr<const FemSpace> test = space;
                if (cfg.test_refine == 2) {
                    test = std::make_shared<const FemSpace>(
                        Partition::uniform(2 * cfg.mesh.n));
                }
                const PGSystem sys =
                    assemble_pg(space, test, cfg.K, cfg.beta, cfg.theta, &cfg.f);
                const SolveInfo info = pg_solve(sys);
                u = info.u;
                out["condition_estimate"] = info.condition_estimate;
                out["linear_residual"] = info.residual;
                break;
            }
            case Method::Galerkin: {
                if (!cfg.K.is_constant()) {
                    const double bw = bilinear_B(coercivity_witness(), coercivity_witness(), cfg.K, cfg.beta,
                                                 cfg.theta);
                    out["coercivity_certificate_exists"] = bw < 0.0;
                    out["witness_energy"] = bw;
                }
                const GalerkinSystem sys =
                    assemble_galerkin(space, cfg.K, cfg.beta, cfg.theta, cfg.f);
                const SolveInfo info = galerkin_solve(sys);
                u = info.u;
                out["condition_estimate"] = info.condition_estimate;
                out["linear_residual"] = info.residual;
                break;
            }
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
    } catch (const SolverError& e) {
        out["solver_error"] = e.what();
        out["condition_estimate"] = e.condition_estimate;
        write_report(out, fs::path(args.out_dir) / "solve_report.json");
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    } catch (const WellposednessViolation& e) {
        out["solver_error"] = e.what();
        write_report(out, fs::path(args.out_dir) / "solve_report.json");
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }

    // Samples of u and of the two-sided integral of u.
    const PowerTermSum iu = two_sided_integral(u.to_piecewise_poly(), cfg.beta, cfg.theta);
    std::vector<double> xs, us, ius;
    for (int k = 0; k <= 200; ++k) {
        const double x = static_cast<double>(k) / 200.0;
        xs.push_back(x);
        us.push_back(u(x));
        ius.push_back(iu(x));
    }
    write_solution_csv((fs::path(args.out_dir) / "solution.csv").string(), xs, us, ius);

    out["norms"]["l2"] = u.l2_norm();
    const double mu = (cfg.method == Method::Galerkin) ? 1.0 - cfg.beta / 2.0 : 1.0 - cfg.beta;
    out["norms"]["energy_order"] = mu;
    out["norms"]["energy"] = j_seminorm(u.to_power_sum(Side::Left), mu, JSide::Left);
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    write_report(out, fs::path(args.out_dir) / "solve_report.json");
    return 0;
}

int cmd_counterexample(const CommonArgs& args, double beta, double theta) {
    json out;
    out["tool"] = "fracbvp";
    out["version"] = kVersion;
    out["command"] = "counterexample";
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const CoercivityCertificate cert = find_coercivity_violation(beta, theta);
        out["beta"] = cert.beta;
        out["theta"] = cert.theta;
        out["delta"] = cert.delta;
        out["K_l"] = cert.K_l;
        out["K_r"] = cert.K_r;
        out["B_ww"] = cert.value;
        out["profile_at_corner"] = cert.profile_at_corner;
        out["shrink_steps"] = cert.shrink_steps;
        out["K"] = diffusivity_to_json(cert.K);
        out["lambda"] = lambda_beta(beta);
        out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        write_report(out, fs::path(args.out_dir) / "certificate.json");
        std::cout << "B(w,w) = " << cert.value << " with K_l = K_r = " << cert.K_l
                  << ", delta = " << cert.delta << "\n";
        return cert.value < 0.0 ? 0 : 1;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const SearchFailure& e) {
        out["error"] = e.what();
        write_report(out, fs::path(args.out_dir) / "certificate.json");
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int cmd_wellposed(const CommonArgs& args) {
    std::string raw;
    ProblemConfig cfg;
    try {
        cfg = parse_config_file(args.config_path, &raw);
        if (cfg.beta >= 0.5)
            throw ConfigError("/beta", "the wellposedness machinery requires beta < 1/2");
    } catch (const std::exception& e) {
        return config_failure(e);
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto space = std::make_shared<const FemSpace>(make_partition(cfg.mesh));
    const WellposednessReport rep = wellposedness_indicator(cfg.K, cfg.beta, cfg.theta, space,
                                                            cfg.tol.xi, cfg.tol.xi_inconclusive);
    json out = base_report(&cfg, raw);
    out["command"] = "wellposed";
    out["wellposedness"] = wellposedness_to_json(rep);
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    write_report(out, fs::path(args.out_dir) / "wellposed_report.json");
    std::cout << "xi = " << rep.xi << "\n";
    switch (rep.verdict) {
        case WellposednessVerdict::Wellposed:
            return 0;
        case WellposednessVerdict::Violated:
            return 1;
        case WellposednessVerdict::Inconclusive:
            return 3;
    }
    return 3;
}

int cmd_converge(const CommonArgs& args) {
    std::string raw;
    ProblemConfig cfg;
    try {
        cfg = parse_config_file(args.config_path, &raw);
    } catch (const std::exception& e) {
        return config_failure(e);
    }
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceTable table;
    bool manufactured = cfg.u_exact.has_value();
    if (manufactured) {
        ManufacturedCase mc{*cfg.u_exact, cfg.K, cfg.beta, cfg.theta, cfg.f};
        table = convergence_study(mc, cfg.method, cfg.n_list);
    } else {
        table = convergence_study_vs_reference(cfg.K, cfg.f, cfg.beta, cfg.theta, cfg.method,
                                               cfg.n_list);
    }
    write_convergence_csv((fs::path(args.out_dir) / "convergence.csv").string(), table);

    json out = base_report(&cfg, raw);
    out["command"] = "converge";
    out["error_reference"] = manufactured ? "manufactured" : "discrete_refined";
    out["energy_seminorm_order"] = table.mu_energy;
    json rows = json::array();
    for (const ConvergenceRow& r : table.rows) {
        json jr;
        jr["n"] = r.n;
        jr["h"] = r.h;
        jr["err_l2"] = r.err_l2;
        jr["err_energy"] = r.err_energy;
        jr["order_l2"] = r.order_l2;
        jr["order_energy"] = r.order_energy;
        jr["ok"] = r.ok;
        if (!r.note.empty()) jr["note"] = r.note;
        rows.push_back(std::move(jr));
    }
    out["rows"] = std::move(rows);
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    write_report(out, fs::path(args.out_dir) / "converge_report.json");
    for (const ConvergenceRow& r : table.rows)
        std::cout << "n=" << r.n << "  err_l2=" << r.err_l2 << "  err_energy=" << r.err_energy
                  << "  order=" << r.order_energy << (r.ok ? "" : "  [failed]") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sided variable-coefficient conservative fractional diffusion solver"};
    app.require_subcommand(1);

    CommonArgs args;
    double gamma_fault = 0.0;
    double ce_beta = 0.5, ce_theta = 0.25;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* copt = sub->add_option("--config", args.config_path, "JSON problem config");
        if (needs_config) copt->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_flag("--force", args.force, "proceed despite a violated wellposedness verdict");
        sub->add_option("--seed", args.seed, "seed for randomized batteries");
        sub->add_option("--threads", args.threads,
                        "worker threads (FRACBVP_THREADS as fallback)");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the operator identity suite");
    add_common(verify, true);
    verify->add_option("--inject-gamma-fault", gamma_fault,
                       "perturb the reference Gamma values (negative control)");

    CLI::App* solve = app.add_subcommand("solve", "solve one boundary-value problem");
    add_common(solve, true);

    CLI::App* counter = app.add_subcommand("counterexample",
                                           "construct a coercivity-violation certificate");
    add_common(counter, false);
    counter->add_option("--beta", ce_beta, "two-sided order in (0,1)");
    counter->add_option("--theta", ce_theta, "direction weight in [0,1]");

    CLI::App* wellposed = app.add_subcommand("wellposed", "evaluate the wellposedness indicator");
    add_common(wellposed, true);

    CLI::App* converge = app.add_subcommand("converge", "refinement study with observed orders");
    add_common(converge, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    apply_threads(args.threads);
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);

    try {
        if (verify->parsed()) return cmd_verify(args, gamma_fault);
        if (solve->parsed()) return cmd_solve(args);
        if (counter->parsed()) return cmd_counterexample(args, ce_beta, ce_theta);
        if (wellposed->parsed()) return cmd_wellposed(args);
        if (converge->parsed()) return cmd_converge(args);
    } catch (const ConfigError& e) {
        return config_failure(e);
    } catch (const std::domain_error& e) {
        return config_failure(e);
    } catch (const std::invalid_argument& e) {
        return config_failure(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
