#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fracbvp/classical.hpp"
#include "fracbvp/harness.hpp"
#include "fracbvp/spaces.hpp"

namespace fracbvp {

struct MeshConfig {
    int n = 64;
    Grading grading = Grading::Uniform;
    double grading_exponent = 1.0;
};

struct Tolerances {
    double xi = 1e-6;
    double xi_inconclusive = 1e-8;
};

/// Parsed problem instance: the single-file JSON config maps onto this.
struct ProblemConfig {
    double beta = 0.25;
    double theta = 0.5;
    DiffusivityField K = DiffusivityField::constant(1.0);
    PowerTermSum f;
    Method method = Method::Petrov;
    MeshConfig mesh;
    Tolerances tol;
    int test_refine = 1;  // 2 = refined test mesh, least-squares fallback
    std::vector<int> n_list{16, 32, 64, 128, 256, 512};
    std::optional<PowerTermSum> u_exact;  // present for manufactured sources
};

/// Throws ConfigError with a JSON-pointer-style location on any defect.
ProblemConfig parse_config_json(const nlohmann::json& j);
ProblemConfig parse_config_file(const std::string& path, std::string* raw_bytes = nullptr);

/// Canonical echo; parsing the echo reproduces the same ProblemConfig.
nlohmann::json config_echo(const ProblemConfig& c);

nlohmann::json diffusivity_to_json(const DiffusivityField& K);
DiffusivityField diffusivity_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json term_sum_to_json(const PowerTermSum& s);

Partition make_partition(const MeshConfig& mesh);

/// Deterministic shortest round-trip decimal formatting.
std::string format_double(double v);

/// RFC-4180 CSV writers (CRLF, header row).
void write_solution_csv(const std::string& path, const std::vector<double>& x,
                        const std::vector<double>& u, const std::vector<double>& iu);
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);

std::string method_name(Method m);
Method method_from_name(const std::string& name, const std::string& where);

}  // namespace fracbvp
