#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "fracbvp/classical.hpp"
#include "fracbvp/linalg.hpp"
#include "fracbvp/spaces.hpp"

namespace fracbvp {

/// Assembled Galerkin system for the two-sided form
/// B(u,v) = theta (K lI^beta Du, Dv) + (1-theta) (K rI^beta Du, Dv).
struct GalerkinSystem {
    Matrix matrix;
    std::vector<double> rhs;
    std::shared_ptr<const FemSpace> space;
    double beta, theta;
    DiffusivityField K;
};

struct SolveInfo {
    GridFunction u;
    double condition_estimate;
    double residual;  // relative algebraic residual of the linear solve
};

double bilinear_B(const PiecewisePoly& w, const PiecewisePoly& v, const DiffusivityField& K,
                  double beta, double theta, const QuadOptions& opt = {});

/// The three-piece hat-shaped function driving the coercivity
/// counterexample: 4x, 4(1/2-x), -4(1-x) on [0,1/4], [1/4,3/4], [3/4,1].
PiecewisePoly coercivity_witness();

/// Closed forms of lI^beta Dw and rI^beta Dw for coercivity_witness.
std::pair<PowerTermSum, PowerTermSum> coercivity_witness_profiles(double beta);

/// lambda(beta) = 2^{1+beta} - 1 - 3^beta; positive strictly inside (0,1).
double lambda_beta(double beta);

/// Witness that the Galerkin form loses coercivity for a variable
/// coefficient: a three-piece K with positive bounds and B(w,w) < 0.
struct CoercivityCertificate {
    double beta, theta;
    double delta;       // width of the unit-coefficient band
    double K_l, K_r;    // shrunken outer coefficient values
    double value;       // B(w,w) < 0
    double profile_at_corner;  // two-sided profile at the active corner
    int shrink_steps;
    DiffusivityField K;
    PiecewisePoly w;
};

CoercivityCertificate find_coercivity_violation(double beta, double theta);

GalerkinSystem assemble_galerkin(std::shared_ptr<const FemSpace> space, const DiffusivityField& K,
                                 double beta, double theta, const PowerTermSum& f,
                                 const QuadOptions& opt = {});

SolveInfo galerkin_solve(const GalerkinSystem& system);

}  // namespace fracbvp
