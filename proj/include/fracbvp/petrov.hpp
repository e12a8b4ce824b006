#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fracbvp/classical.hpp"
#include "fracbvp/galerkin.hpp"
#include "fracbvp/linalg.hpp"
#include "fracbvp/spaces.hpp"

namespace fracbvp {

/// Petrov-Galerkin system for A(u,v) = (K D I^beta_theta u, Dv); trial and
/// test spaces are zero-trace hats, optionally with a refined test mesh
/// (least-squares fallback).
struct PGSystem {
    Matrix matrix;
    std::vector<double> rhs;
    std::shared_ptr<const FemSpace> trial;
    std::shared_ptr<const FemSpace> test;
    double beta, theta;
    DiffusivityField K;
    bool least_squares() const { return matrix.rows() != matrix.cols(); }
};

/// A(w, v) with the mandatory hypothesis beta in (0, 1/2).
double bilinear_A(const PiecewisePoly& w, const PiecewisePoly& v, const DiffusivityField& K,
                  double beta, double theta, const QuadOptions& opt = {});

PGSystem assemble_pg(std::shared_ptr<const FemSpace> trial, std::shared_ptr<const FemSpace> test,
                     const DiffusivityField& K, double beta, double theta, const PowerTermSum* f,
                     const QuadOptions& opt = {});

SolveInfo pg_solve(const PGSystem& system);

/// Scalar boundary functionals of a discrete function, exact through the
/// term algebra: (lI^beta v)(1) and (rI^beta v)(0).
double left_boundary_functional(const GridFunction& v, double beta);
double right_boundary_functional(const GridFunction& v, double beta);

/// Particular solutions driven by the harmonic profiles: constant-unit
/// operator, right-hand sides (Dw_l, Dv) and (Dw_r, Dv). They satisfy
/// u_l + u_r = 0 up to solver tolerance; both vanish for constant K.
std::pair<GridFunction, GridFunction> solve_ul_ur(const DiffusivityField& K, double beta,
                                                  double theta,
                                                  std::shared_ptr<const FemSpace> space);

enum class WellposednessVerdict { Wellposed, Violated, Inconclusive };

struct WellposednessReport {
    double xi = 0.0;        // 1 + theta (lI u_l)(1) - (1-theta) (rI u_l)(0)
    double xi_alt = 0.0;    // alternative u_r-based form; its left term carries no theta weight
    double discrepancy = 0.0;
    double u_l_norm = 0.0;  // J^{1-beta} seminorms of the particular solutions
    double u_r_norm = 0.0;
    double perturbation_residual = 0.0;
    WellposednessVerdict verdict = WellposednessVerdict::Inconclusive;
    double tol = 1e-6;
    double tol_inconclusive = 1e-8;
};

WellposednessReport wellposedness_indicator(const DiffusivityField& K, double beta, double theta,
                                            std::shared_ptr<const FemSpace> space,
                                            double tol = 1e-6, double tol_inconclusive = 1e-8);

/// Quadrature of the one-sided closed form of the indicator
/// (theta = 1 or 0): (1-beta)/R(1) * int (1-s)^{-beta}/K (or mirrored).
double one_sided_xi_closed_form(const DiffusivityField& K, double beta, int theta01);

/// || (int_0^1 ds/K)^{-1} / K - 1 ||_{L2(0,1)}.
double perturbation_check(const DiffusivityField& K);

/// Solution recovered from the integral equation
/// I^beta_theta u - (1-theta)(rI u)(0) w_l - theta (lI u)(1) w_r = w_f
/// via a bordered linear system coupling the trial coefficients with the
/// two scalar functionals.
struct CharacterizationSolve {
    GridFunction u;
    double c_l = 0.0, c_r = 0.0;  // the two scalar multipliers
    double residual_sup = 0.0;    // integral-equation defect on a 201-point grid
};

CharacterizationSolve solve_via_characterization(const DiffusivityField& K, double beta,
                                                 double theta, const PowerTermSum& f,
                                                 std::shared_ptr<const FemSpace> space);

/// ||D^k I^beta_theta u||_{L2} for k = 0..k_max, computed from the
/// differentiated integral equation so the discrete u is never
/// differentiated directly.
std::vector<std::pair<int, double>> regularity_report(const GridFunction& u,
                                                      const DiffusivityField& K,
                                                      const PowerTermSum& f, double beta,
                                                      double theta, int k_max);

}  // namespace fracbvp
