#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fracbvp/integrate.hpp"
#include "fracbvp/piecewise_poly.hpp"
#include "fracbvp/power_term.hpp"

namespace fracbvp {

enum class Grading { Uniform, GradedLeft, GradedRight };

/// Subdivision of [0,1] into n >= 2 cells.
class Partition {
public:
    static Partition uniform(int n);
    /// Nodes (i/n)^r clustered at the left end (or mirrored at the right).
    static Partition graded(int n, double exponent, Grading side = Grading::GradedLeft);
    static Partition from_nodes(std::vector<double> nodes);

    const std::vector<double>& nodes() const { return nodes_; }
    int cells() const { return static_cast<int>(nodes_.size()) - 1; }
    double h(int cell) const { return nodes_[cell + 1] - nodes_[cell]; }
    double h_max() const;
    double h_min() const;
    Grading grading() const { return grading_; }

private:
    std::vector<double> nodes_;
    Grading grading_ = Grading::Uniform;
};

enum class BoundaryKind { ZeroTrace, Free };

/// Continuous piecewise-polynomial space; degree 1 (hats) in this version,
/// higher degrees are rejected behind the same interface.
class FemSpace {
public:
    FemSpace(Partition partition, int degree = 1, BoundaryKind boundary = BoundaryKind::ZeroTrace);

    int dof_count() const;
    int degree() const { return degree_; }
    BoundaryKind boundary() const { return boundary_; }
    const Partition& partition() const { return partition_; }
    /// Mesh node carrying dof i.
    double node_of_dof(int i) const;
    /// The i-th nodal basis function as a PiecewisePoly on a minimal span.
    PiecewisePoly basis(int i) const;

private:
    Partition partition_;
    int degree_;
    BoundaryKind boundary_;
};

std::vector<PiecewisePoly> hat_basis(const FemSpace& space);

/// Coefficient vector over a FemSpace.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const FemSpace> space, std::vector<double> coefficients);

    double operator()(double x) const;
    const std::vector<double>& coefficients() const { return coef_; }
    const FemSpace& space() const { return *space_; }
    std::shared_ptr<const FemSpace> space_ptr() const { return space_; }

    PiecewisePoly to_piecewise_poly() const;
    PowerTermSum to_power_sum(Side side = Side::Left) const;

    GridFunction operator-(const GridFunction& other) const;
    GridFunction operator+(const GridFunction& other) const;
    double l2_norm() const;  // exact per-cell integration

    static GridFunction interpolate(std::shared_ptr<const FemSpace> space,
                                    const std::function<double(double)>& f);
    static GridFunction zero(std::shared_ptr<const FemSpace> space);

private:
    std::shared_ptr<const FemSpace> space_;
    std::vector<double> coef_;
    std::vector<double> node_values_;  // with boundary zeros for fast eval
};

enum class JSide { Left, Right };

struct JNormOptions {
    /// Include the L2 mass of the zero-extension's fractional derivative
    /// outside (0,1). The operator identities (cosine pairing, two-sided
    /// sandwich) hold exactly only for the extended norm.
    bool extended = false;
    QuadOptions quad;
};

/// |w|_{J^mu} = ||D^mu w||_{L2} through the closed-form term algebra;
/// requires w(0) = w(1) = 0.
double j_seminorm(const PowerTermSum& w, double mu, JSide side, const JNormOptions& = {});
double j_seminorm(const PiecewisePoly& w, double mu, JSide side, const JNormOptions& = {});
double j_seminorm_two_sided(const PowerTermSum& w, double mu, double theta,
                            const JNormOptions& = {});

/// Energy-style error |w_h - w|_{J_l^mu}.
double energy_error(const GridFunction& w_h, const PowerTermSum& w_exact, double mu);

/// L2 inner product of piecewise polynomials; quad_order sets the
/// per-cell Gauss-Legendre size (term sums use the integrate.hpp overload).
double l2_inner(const PiecewisePoly& a, const PiecewisePoly& b, int quad_order = 8);

/// Squared L2 tail over (1,inf) of the zero-extension of lI^sigma[dw]
/// (dw given in the left basis), and its mirror for the right side.
double left_extension_tail_sq(const PowerTermSum& dw, double sigma);
double right_extension_tail_sq(const PowerTermSum& dw, double sigma);

}  // namespace fracbvp
