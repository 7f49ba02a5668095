#pragma once

// Chambolle-Pock primal-dual solver for composite problems
//
//   min_X  (1/N) ||X^T Z - D||_F^2 + lambda ||X^T F||_{1,1}
//
// with both terms dualized (the primal proximal step is a plain Euclidean
// step). The least-squares dual has a closed-form prox; the l1 dual is a
// box projection onto [-lambda, lambda]. Includes a power-iteration
// operator-norm estimator and a subgradient stationarity certifier for the
// identity-F case.

#include <Eigen/Dense>
#include <optional>

#include "nsdasf/errors.hpp"

namespace nsdasf {

using Matrix = Eigen::MatrixXd;

struct CompositeProblem {
    Matrix data_operator;  // Z, M~ x N, applied as X -> Z^T X
    Matrix target;         // D, Q x N
    Matrix reg_operator;   // F, M~ x L~, applied as X -> F^T X
    double lambda = 0.0;

    long rows() const { return data_operator.rows(); }
    long outputs() const { return target.rows(); }
    long n_samples() const { return data_operator.cols(); }

    void validate() const;
};

struct SolverOptions {
    int max_iterations = 5000;
    double tolerance = 1e-9;  // on the normalized fixed-point residual
    double step_ratio = 1.0;  // sigma / tau
    std::optional<Matrix> warm_start;
    double overrelaxation = 1.0;  // reserved; extrapolation always uses theta = 1
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;
    double objective = 0.0;
    bool converged = false;
};

// Largest singular value via power iteration, with a (1 + 1e-6) safety
// factor so the estimate never falls below the true norm by more than
// 1e-6 relative.
double operator_norm(const Matrix& k);

inline double soft_threshold(double v, double t) {
    const double shrunk = std::abs(v) - t;
    return shrunk > 0 ? (v > 0 ? shrunk : -shrunk) : 0.0;
}

Matrix soft_threshold(const Matrix& v, double t);

// Composite objective value at X.
double composite_objective(const CompositeProblem& p, const Matrix& x);

// Gradient of the smooth part, (2/N) Z (Z^T X - D^T).
Matrix composite_gradient(const CompositeProblem& p, const Matrix& x);

std::pair<Matrix, SolveReport> solve(const CompositeProblem& p, const SolverOptions& opts = {});

// Max-norm violation of the subgradient optimality condition
// 0 in grad + lambda d||.||_1 at X. Requires identity reg_operator.
double stationarity_residual(const Matrix& x, const CompositeProblem& p);

}  // namespace nsdasf
