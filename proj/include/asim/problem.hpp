#pragma once

#include <Eigen/Core>
#include <memory>

#include "asim/rng.hpp"

namespace asim {

struct Evaluation {
  double loss;
  Eigen::MatrixXd grad;
};

// Objective with an exact full-batch gradient oracle. Parameters are a dense
// matrix; vector-shaped problems use a single column. Immutable after
// construction and safe to share across runs.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual Evaluation evaluate(const Eigen::MatrixXd& W) const = 0;
};

// f(W) = 1/2 ||A W - b||^2 with planted solution b = A W_star.
class LeastSquaresProblem final : public Problem {
 public:
  LeastSquaresProblem(Eigen::MatrixXd A, Eigen::VectorXd W_star);

  Eigen::Index rows() const override { return A_.cols(); }
  Eigen::Index cols() const override { return 1; }
  Evaluation evaluate(const Eigen::MatrixXd& W) const override;

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& W_star() const { return W_star_; }
  double L() const { return L_; }    // largest eigenvalue of A^T A
  double mu() const { return mu_; }  // smallest eigenvalue of A^T A

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd W_star_;
  double L_;
  double mu_;
};

// A ~ N(0, sigma_A2), W_star ~ N(0, sigma_Wstar2) entrywise.
LeastSquaresProblem make_least_squares(Eigen::Index D, Eigen::Index D_out, double sigma_A2,
                                       double sigma_Wstar2, Rng& rng);

// f(W) = (L/2) ||W - W_star||^2 with all coordinates of W_star identical,
// the instance driven by the state-dependent two-point noise.
class LowerBoundQuadratic final : public Problem {
 public:
  LowerBoundQuadratic(double L, double w_star, double tau, Eigen::Index D);

  Eigen::Index rows() const override { return D_; }
  Eigen::Index cols() const override { return 1; }
  Evaluation evaluate(const Eigen::MatrixXd& W) const override;

  // Runs start exactly at the minimizer.
  Eigen::MatrixXd initial_point() const;

  double L() const { return L_; }
  double w_star() const { return w_star_; }
  double tau() const { return tau_; }
  Eigen::Index D() const { return D_; }

 private:
  double L_;
  double w_star_;
  double tau_;
  Eigen::Index D_;
};

// Validates |w_star| <= tau/4; throws std::domain_error naming the violated
// inequality.
LowerBoundQuadratic make_lower_bound_problem(double L, double w_star, double tau,
                                             Eigen::Index D);

// Noise/step-size admissibility for the lower-bound instance:
//   sigma <= tau L sqrt(D) / (4 sqrt(3))
//   alpha <= min(1/(2L), 1/(L + 6 sigma/(tau sqrt(D))))
// Throws std::domain_error naming the violated inequality.
void validate_lower_bound_constraints(const LowerBoundQuadratic& problem, double sigma,
                                      double alpha);

// Central finite differences of problem.evaluate, for gradient verification.
Eigen::MatrixXd fd_gradient(const Problem& problem, const Eigen::MatrixXd& W, double h);

}  // namespace asim
