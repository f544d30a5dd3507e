#pragma once

#include <vector>

#include "asim/problem.hpp"

namespace asim {

// Fully connected classifier: sigmoid hidden layers, softmax cross-entropy
// loss, exact full-batch backprop gradient. Parameters live in one flattened
// column vector (per layer: column-major weights, then biases) so the whole
// network maps onto a single analog tile.
class FcnProblem final : public Problem {
 public:
  // layer_sizes = {in, hidden..., out}; X is samples x in, labels in [0, out).
  FcnProblem(std::vector<Eigen::Index> layer_sizes, Eigen::MatrixXd X,
             Eigen::VectorXi labels);

  Eigen::Index rows() const override { return param_count_; }
  Eigen::Index cols() const override { return 1; }
  Evaluation evaluate(const Eigen::MatrixXd& params) const override;

  Eigen::Index param_count() const { return param_count_; }
  const std::vector<Eigen::Index>& layer_sizes() const { return sizes_; }
  Eigen::Index n_samples() const { return X_.rows(); }

  // Small random weights (scaled by fan-in), zero biases.
  Eigen::MatrixXd default_init(Rng& rng) const;

 private:
  std::vector<Eigen::Index> sizes_;
  Eigen::MatrixXd X_;
  Eigen::MatrixXd Y_;  // one-hot
  Eigen::Index param_count_;
};

struct Dataset {
  Eigen::MatrixXd X;       // samples x features, values in [0, 1]
  Eigen::VectorXi labels;  // class indices
};

// Synthetic classification: per-class centers with Gaussian spread, features
// clamped to [0, 1], labels assigned round-robin. Fully offline stand-in for
// image data.
Dataset make_blobs(Eigen::Index n_samples, Eigen::Index n_features, int n_classes, Rng& rng);

}  // namespace asim
