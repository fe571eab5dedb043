#pragma once

// Numerical kernels shared by the solvers: linear maximization over an
// intersection of centered ellipsoids, golden-section search, the positive
// root of a quartic with one sign change, and a minimum-norm QP.

#include "afsec/network_model.hpp"

#include <functional>
#include <vector>

namespace afsec {

struct SolverConfig {
    double feasibility_tol = 1e-8;
    double kkt_tol = 1e-6;
    double barrier_mu = 10.0;
    double barrier_t0 = 1.0;
    int max_newton_iters = 200; // per centering step
    double golden_tol = 1e-7;
    double root_tol = 1e-10;
    double gap_tol = 1e-10;     // barrier stops once (constraint count)/t falls below this

    /// Throws Error(InvalidConfig) unless every field is positive (and mu > 1).
    void validate() const;
};

/// Constraints v^T A_j v <= 1 with each A_j symmetric positive semidefinite.
class EllipsoidSet {
public:
    EllipsoidSet() = default;
    /// Throws Error(InvalidConstraints) on a non-square, asymmetric
    /// (|A - A^T| > 1e-12 * max(1, |A|)) or indefinite (min eigenvalue below
    /// -1e-10 * max(1, |A|)) matrix, or on mismatched dimensions.
    explicit EllipsoidSet(std::vector<Mat> matrices);

    void add(Mat A);

    const std::vector<Mat>& matrices() const { return mats_; }
    std::size_t size() const { return mats_.size(); }
    Eigen::Index dim() const { return mats_.empty() ? 0 : mats_.front().rows(); }

private:
    std::vector<Mat> mats_;
};

struct LinearMaxResult {
    Vec v;
    double value = 0.0;
    Vec multipliers;              // lambda_j >= 0
    double stationarity = 0.0;    // |c - sum 2 lambda_j A_j v|_inf
    double complementarity = 0.0; // max_j |lambda_j (v^T A_j v - 1)|
    double max_violation = 0.0;   // max_j (v^T A_j v - 1), <= 0 when strictly feasible
    int newton_iterations = 0;
    int outer_iterations = 0;
};

/// max c^T v  s.t.  v^T A_j v <= 1 for all j, by a log-barrier interior-point
/// method started at v = 0. Throws Unbounded when c has a component along a
/// direction every A_j annihilates, NoConvergence when a centering step
/// exceeds cfg.max_newton_iters or the final KKT residuals exceed kkt_tol.
LinearMaxResult maximize_linear_over_ellipsoids(const Vec& c, const EllipsoidSet& constraints,
                                                const SolverConfig& cfg = {});

struct GoldenResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

/// Maximizes a unimodal f on [lo, hi]. Ties move the bracket left, so flat
/// functions return the smallest point examined. Throws InvalidBracket if
/// lo >= hi.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol);

/// Value of c0 - c1 x - c2 x^2 - c3 x^3 - x^4.
double quartic_value(double c0, double c1, double c2, double c3, double x);

/// Unique positive root of c0 - c1 x - c2 x^2 - c3 x^3 - x^4 (c0 > 0,
/// c1..c3 >= 0): doubling bracket, then bisection to machine precision.
/// Throws BadSignPattern if the coefficients violate the sign pattern.
double positive_quartic_root(double c0, double c1, double c2, double c3, double root_tol = 1e-10);

struct QpResult {
    Vec w;
    double objective = 0.0;       // w^T w
    double eq_residual = 0.0;     // |Heq w - beq|_inf
    double ineq_violation = 0.0;  // max(0, max_i (Gineq w)_i)
    double kkt_residual = 0.0;
    int iterations = 0;
};

/// min w^T w  s.t.  Heq w = beq,  Gineq w <= 0. Eliminates the equalities
/// through the null space of Heq and solves the remaining least-distance
/// problem with Lawson-Hanson NNLS. Throws Infeasible when the equalities
/// are inconsistent or the feasible polytope is empty.
QpResult min_norm_qp(const Mat& Heq, const Vec& beq, const Mat& Gineq,
                     const SolverConfig& cfg = {});

/// Lawson-Hanson non-negative least squares: min |E u - f| s.t. u >= 0.
Vec nnls(const Mat& E, const Vec& f, int* iterations = nullptr);

} // namespace afsec
