#include "oracles.hpp"

#include <cmath>

namespace nsdasf::test {

Matrix ista_lasso(const CompositeProblem& p, double tolerance, int max_iterations) {
    const double n = static_cast<double>(p.n_samples());
    const Matrix gram = p.data_operator * p.data_operator.transpose();
    const Matrix cross = p.data_operator * p.target.transpose();
    // Lipschitz constant of the gradient: (2/N) lambda_max(Z Z^T).
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const double lipschitz = (2.0 / n) * eig.eigenvalues().maxCoeff();
    const double step = 1.0 / lipschitz;

    Matrix x = Matrix::Zero(p.rows(), p.outputs());
    for (int j = 0; j < max_iterations; ++j) {
        const Matrix grad = (2.0 / n) * (gram * x - cross);
        Matrix next = (x - step * grad).unaryExpr([&](double v) {
            return soft_threshold(v, step * p.lambda);
        });
        const double move = (next - x).norm();
        x = std::move(next);
        if (move <= tolerance) break;
    }
    return x;
}

Matrix admm_composite(const CompositeProblem& p, double rho, double tolerance,
                      int max_iterations) {
    const double n = static_cast<double>(p.n_samples());
    const Matrix gram = p.data_operator * p.data_operator.transpose();
    const Matrix cross = p.data_operator * p.target.transpose();
    const Matrix& f = p.reg_operator;

    const Matrix system = (2.0 / n) * gram + rho * (f * f.transpose());
    Eigen::LLT<Matrix> chol(system);

    const long l = f.cols();
    const long q = p.outputs();
    Matrix v = Matrix::Zero(l, q);
    Matrix u = Matrix::Zero(l, q);
    Matrix x = Matrix::Zero(p.rows(), q);
    for (int j = 0; j < max_iterations; ++j) {
        x = chol.solve((2.0 / n) * cross + rho * (f * (v - u)));
        const Matrix w = f.transpose() * x;
        const Matrix v_next = (w + u).unaryExpr([&](double e) {
            return soft_threshold(e, p.lambda / rho);
        });
        const double primal_residual = (w - v_next).norm();
        const double dual_residual = rho * (f * (v_next - v)).norm();
        v = v_next;
        u += w - v;
        if (primal_residual <= tolerance && dual_residual <= tolerance) break;
    }
    return x;
}

Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x,
                                  double step) {
    Matrix grad(x.rows(), x.cols());
    Matrix probe = x;
    for (long c = 0; c < x.cols(); ++c) {
        for (long r = 0; r < x.rows(); ++r) {
            probe(r, c) = x(r, c) + step;
            const double up = f(probe);
            probe(r, c) = x(r, c) - step;
            const double down = f(probe);
            probe(r, c) = x(r, c);
            grad(r, c) = (up - down) / (2.0 * step);
        }
    }
    return grad;
}

}  // namespace nsdasf::test
