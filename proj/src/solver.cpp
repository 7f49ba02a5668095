#include "nsdasf/solver.hpp"

#include <cmath>
#include <string>

namespace nsdasf {

void CompositeProblem::validate() const {
    if (data_operator.rows() == 0 || data_operator.cols() == 0)
        throw config_error("composite: empty data operator");
    if (reg_operator.rows() != data_operator.rows())
        throw config_error("composite: operator row counts must agree");
    if (target.cols() != data_operator.cols())
        throw config_error("composite: target column count must equal sample count");
    if (lambda < 0) throw config_error("composite: lambda must be nonnegative");
    if (!data_operator.allFinite() || !reg_operator.allFinite() || !target.allFinite())
        throw numeric_error("composite: non-finite problem data");
}

double operator_norm(const Matrix& k) {
    if (k.size() == 0 || k.isZero(0.0)) throw degenerate_input_error("operator_norm: zero matrix");
    // Power iteration on the Gram operator v -> K^T (K v), applied without
    // forming K^T K.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(k.cols());
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = k.transpose() * (k * v);
        const double norm = w.norm();
        if (norm == 0.0) {
            // Landed in the null space; restart from a perturbed direction.
            v = Eigen::VectorXd::LinSpaced(k.cols(), 1.0, 2.0).normalized();
            continue;
        }
        const double next = std::sqrt(norm);
        v = w / norm;
        if (it > 0 && std::abs(next - estimate) <= 1e-6 * next) {
            estimate = next;
            break;
        }
        estimate = next;
    }
    return estimate * (1.0 + 1e-6);
}

Matrix soft_threshold(const Matrix& v, double t) {
    return v.unaryExpr([t](double e) { return soft_threshold(e, t); });
}

double composite_objective(const CompositeProblem& p, const Matrix& x) {
    const double n = static_cast<double>(p.n_samples());
    const double loss =
        (p.data_operator.transpose() * x - p.target.transpose()).squaredNorm() / n;
    return loss + p.lambda * (p.reg_operator.transpose() * x).cwiseAbs().sum();
}

Matrix composite_gradient(const CompositeProblem& p, const Matrix& x) {
    const double n = static_cast<double>(p.n_samples());
    return (2.0 / n) * (p.data_operator *
                        (p.data_operator.transpose() * x - p.target.transpose()));
}

std::pair<Matrix, SolveReport> solve(const CompositeProblem& p, const SolverOptions& opts) {
    p.validate();
    if (opts.max_iterations <= 0) throw config_error("solve: max_iterations must be positive");
    if (opts.tolerance <= 0) throw config_error("solve: tolerance must be positive");
    if (opts.step_ratio <= 0) throw config_error("solve: step_ratio must be positive");
    if (opts.overrelaxation < 1.0 || opts.overrelaxation > 2.0)
        throw config_error("solve: overrelaxation must lie in [1, 2]");

    const long m = p.rows();
    const long q = p.outputs();
    const double n = static_cast<double>(p.n_samples());

    // The 1/N of the data term is folded into the operator: with
    // Zn = Z/sqrt(N), Dn = target/sqrt(N) the smooth term is
    // ||X^T Zn - Dn||_F^2. This keeps ||Zn|| on the same scale as ||F||
    // regardless of the sample count, which conditions the primal-dual
    // iteration far better than pairing a raw Z with a 1/N-damped dual.
    const double inv_root_n = 1.0 / std::sqrt(n);

    // ||K|| of the stacked operator K = [Zn F]^T.
    Matrix stacked(m, p.data_operator.cols() + p.reg_operator.cols());
    stacked << inv_root_n * p.data_operator, p.reg_operator;
    const double knorm = operator_norm(stacked);

    // tau * sigma * ||K||^2 = 0.99^2 with sigma / tau = step_ratio.
    const double root_ratio = std::sqrt(opts.step_ratio);
    const double tau = 0.99 / (knorm * root_ratio);
    const double sigma = 0.99 * root_ratio / knorm;

    // The least-squares dual p1 enters the iteration only through Zn p1 and
    // its prox is affine, so we track w = Zn p1 directly and the per-iteration
    // cost is independent of N.
    const Matrix gram = (p.data_operator * p.data_operator.transpose()) / n;
    const Matrix cross = (p.data_operator * p.target.transpose()) / n;

    Matrix x = opts.warm_start ? *opts.warm_start : Matrix::Zero(m, q);
    if (opts.warm_start && (x.rows() != m || x.cols() != q))
        throw config_error("solve: warm start dimensions mismatch problem");
    Matrix x_bar = x;
    Matrix w = Matrix::Zero(m, q);                       // Z p1
    Matrix p2 = Matrix::Zero(p.reg_operator.cols(), q);  // l1 dual

    const double dual_scale = 1.0 + sigma / 2.0;
    SolveReport report;
    for (int j = 1; j <= opts.max_iterations; ++j) {
        w = (w + sigma * (gram * x_bar - cross)) / dual_scale;
        p2 = (p2 + sigma * (p.reg_operator.transpose() * x_bar))
                 .cwiseMax(-p.lambda)
                 .cwiseMin(p.lambda);
        const Matrix x_next = x - tau * (w + p.reg_operator * p2);
        const double increment = (x_next - x).norm();
        x_bar = 2.0 * x_next - x;
        x = x_next;
        if (!x.allFinite())
            throw numeric_error("solve: diverged at iteration " + std::to_string(j));
        report.iterations = j;
        report.residual = increment / std::max(1.0, x.norm());
        if (report.residual <= opts.tolerance) {
            report.converged = true;
            break;
        }
    }
    report.objective = composite_objective(p, x);
    // The iteration is not monotone; guarantee the endpoint never falls
    // behind the warm start (which also keeps ties at the previous point).
    if (opts.warm_start) {
        const double start_objective = composite_objective(p, *opts.warm_start);
        if (start_objective < report.objective) {
            x = *opts.warm_start;
            report.objective = start_objective;
        }
    }
    return {std::move(x), report};
}

double stationarity_residual(const Matrix& x, const CompositeProblem& p) {
    p.validate();
    if (p.reg_operator.rows() != p.reg_operator.cols() ||
        !p.reg_operator.isIdentity(0.0))
        throw config_error("stationarity_residual: identity reg_operator required");
    if (x.rows() != p.rows() || x.cols() != p.outputs())
        throw config_error("stationarity_residual: solution dimensions mismatch");
    const Matrix grad = composite_gradient(p, x);
    const double zero_tol = 1e-8 * (1.0 + x.cwiseAbs().maxCoeff());
    double residual = 0.0;
    for (long c = 0; c < x.cols(); ++c) {
        for (long r = 0; r < x.rows(); ++r) {
            const double xi = x(r, c);
            const double gi = grad(r, c);
            double violation;
            if (std::abs(xi) <= zero_tol)
                violation = std::max(std::abs(gi) - p.lambda, 0.0);
            else
                violation = std::abs(gi + p.lambda * (xi > 0 ? 1.0 : -1.0));
            residual = std::max(residual, violation);
        }
    }
    return residual;
}

}  // namespace nsdasf
