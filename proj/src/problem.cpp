#include "asim/problem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace asim {

LeastSquaresProblem::LeastSquaresProblem(Eigen::MatrixXd A, Eigen::VectorXd W_star)
    : A_(std::move(A)), W_star_(std::move(W_star)) {
  if (A_.cols() != W_star_.size())
    throw std::invalid_argument("A columns must match W_star length");
  b_ = A_ * W_star_;
  Eigen::MatrixXd gram = A_.transpose() * A_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  L_ = es.eigenvalues().maxCoeff();
  mu_ = es.eigenvalues().minCoeff();
}

Evaluation LeastSquaresProblem::evaluate(const Eigen::MatrixXd& W) const {
  if (W.rows() != A_.cols() || W.cols() != 1)
    throw std::invalid_argument("weight shape mismatch");
  Eigen::VectorXd r = A_ * W.col(0) - b_;
  return {0.5 * r.squaredNorm(), A_.transpose() * r};
}

LeastSquaresProblem make_least_squares(Eigen::Index D, Eigen::Index D_out, double sigma_A2,
                                       double sigma_Wstar2, Rng& rng) {
  if (D < 1 || D_out < 1) throw std::invalid_argument("dimensions must be >= 1");
  if (!(sigma_A2 > 0.0) || !(sigma_Wstar2 > 0.0))
    throw std::invalid_argument("variances must be > 0");
  Eigen::MatrixXd A(D_out, D);
  double sa = std::sqrt(sigma_A2);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = sa * rng.normal();
  Eigen::VectorXd W_star(D);
  double sw = std::sqrt(sigma_Wstar2);
  for (Eigen::Index i = 0; i < D; ++i) W_star(i) = sw * rng.normal();
  return LeastSquaresProblem(std::move(A), std::move(W_star));
}

LowerBoundQuadratic::LowerBoundQuadratic(double L, double w_star, double tau, Eigen::Index D)
    : L_(L), w_star_(w_star), tau_(tau), D_(D) {
  if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (D < 1) throw std::invalid_argument("D must be >= 1");
}

Evaluation LowerBoundQuadratic::evaluate(const Eigen::MatrixXd& W) const {
  if (W.rows() != D_ || W.cols() != 1) throw std::invalid_argument("weight shape mismatch");
  Eigen::MatrixXd diff = W.array() - w_star_;
  return {0.5 * L_ * diff.squaredNorm(), L_ * diff};
}

Eigen::MatrixXd LowerBoundQuadratic::initial_point() const {
  return Eigen::MatrixXd::Constant(D_, 1, w_star_);
}

LowerBoundQuadratic make_lower_bound_problem(double L, double w_star, double tau,
                                             Eigen::Index D) {
  if (std::abs(w_star) > tau / 4.0) {
    std::ostringstream msg;
    msg << "|w_star| <= tau/4 violated: |" << w_star << "| > " << tau / 4.0;
    throw std::domain_error(msg.str());
  }
  return LowerBoundQuadratic(L, w_star, tau, D);
}

void validate_lower_bound_constraints(const LowerBoundQuadratic& problem, double sigma,
                                      double alpha) {
  double tau = problem.tau();
  double L = problem.L();
  double sqrt_d = std::sqrt(static_cast<double>(problem.D()));
  double sigma_cap = tau * L * sqrt_d / (4.0 * std::sqrt(3.0));
  if (sigma > sigma_cap) {
    std::ostringstream msg;
    msg << "sigma <= tau*L*sqrt(D)/(4*sqrt(3)) violated: " << sigma << " > " << sigma_cap;
    throw std::domain_error(msg.str());
  }
  // The quadratic is L-strongly convex, so mu = L here.
  double alpha_cap = std::min(1.0 / (2.0 * L), 1.0 / (L + 6.0 * sigma / (tau * sqrt_d)));
  if (alpha > alpha_cap) {
    std::ostringstream msg;
    msg << "alpha <= min(1/(2L), 1/(mu + 6 sigma/(tau sqrt(D)))) violated: " << alpha << " > "
        << alpha_cap;
    throw std::domain_error(msg.str());
  }
}

Eigen::MatrixXd fd_gradient(const Problem& problem, const Eigen::MatrixXd& W, double h) {
  Eigen::MatrixXd g(W.rows(), W.cols());
  Eigen::MatrixXd Wp = W;
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    double w0 = W.data()[i];
    Wp.data()[i] = w0 + h;
    double fp = problem.evaluate(Wp).loss;
    Wp.data()[i] = w0 - h;
    double fm = problem.evaluate(Wp).loss;
    Wp.data()[i] = w0;
    g.data()[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace asim
