#include "asim/fcn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asim {

namespace {

Eigen::Index count_params(const std::vector<Eigen::Index>& sizes) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) n += sizes[l] * sizes[l + 1] + sizes[l + 1];
  return n;
}

}  // namespace

FcnProblem::FcnProblem(std::vector<Eigen::Index> layer_sizes, Eigen::MatrixXd X,
                       Eigen::VectorXi labels)
    : sizes_(std::move(layer_sizes)), X_(std::move(X)) {
  if (sizes_.size() < 2) throw std::invalid_argument("need at least input and output layers");
  if (X_.rows() == 0) throw std::invalid_argument("empty dataset");
  if (X_.cols() != sizes_.front()) throw std::invalid_argument("feature width mismatch");
  if (labels.size() != X_.rows()) throw std::invalid_argument("label count mismatch");
  Eigen::Index n_classes = sizes_.back();
  Y_ = Eigen::MatrixXd::Zero(X_.rows(), n_classes);
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) < 0 || labels(i) >= n_classes) throw std::invalid_argument("label out of range");
    Y_(i, labels(i)) = 1.0;
  }
  param_count_ = count_params(sizes_);
}

Evaluation FcnProblem::evaluate(const Eigen::MatrixXd& params) const {
  if (params.rows() != param_count_ || params.cols() != 1)
    throw std::invalid_argument("parameter shape mismatch");
  const Eigen::Index n = X_.rows();
  const std::size_t n_layers = sizes_.size() - 1;

  // Unpack flattened parameters into per-layer views.
  std::vector<Eigen::Map<const Eigen::MatrixXd>> W;
  std::vector<Eigen::Map<const Eigen::VectorXd>> bvec;
  const double* base = params.data();
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    W.emplace_back(base + off, sizes_[l], sizes_[l + 1]);
    off += sizes_[l] * sizes_[l + 1];
    bvec.emplace_back(base + off, sizes_[l + 1]);
    off += sizes_[l + 1];
  }

  // Forward: sigmoid activations on hidden layers, raw logits at the top.
  std::vector<Eigen::MatrixXd> H(n_layers + 1);
  H[0] = X_;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd Z = (H[l] * W[l]).rowwise() + bvec[l].transpose();
    if (l + 1 < n_layers)
      H[l + 1] = 1.0 / (1.0 + (-Z.array()).exp());
    else
      H[l + 1] = std::move(Z);
  }

  // Softmax cross-entropy, stabilized by the rowwise max.
  Eigen::MatrixXd logits = H[n_layers];
  Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd shifted = logits.colwise() - row_max;
  Eigen::MatrixXd expz = shifted.array().exp();
  Eigen::VectorXd zsum = expz.rowwise().sum();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index y;
    Y_.row(i).maxCoeff(&y);
    loss += std::log(zsum(i)) - shifted(i, y);
  }
  loss /= static_cast<double>(n);

  // Backward.
  Eigen::MatrixXd grad(param_count_, 1);
  double* gbase = grad.data();
  Eigen::MatrixXd delta =
      ((expz.array().colwise() / zsum.array()).matrix() - Y_) / static_cast<double>(n);
  for (std::size_t l = n_layers; l-- > 0;) {
    Eigen::Index woff = 0;
    for (std::size_t m = 0; m < l; ++m) woff += sizes_[m] * sizes_[m + 1] + sizes_[m + 1];
    Eigen::Map<Eigen::MatrixXd> gW(gbase + woff, sizes_[l], sizes_[l + 1]);
    Eigen::Map<Eigen::VectorXd> gb(gbase + woff + sizes_[l] * sizes_[l + 1], sizes_[l + 1]);
    gW = H[l].transpose() * delta;
    gb = delta.colwise().sum();
    if (l > 0) {
      Eigen::MatrixXd dH = delta * W[l].transpose();
      delta = dH.array() * H[l].array() * (1.0 - H[l].array());
    }
  }
  return {loss, std::move(grad)};
}

Eigen::MatrixXd FcnProblem::default_init(Rng& rng) const {
  Eigen::MatrixXd params = Eigen::MatrixXd::Zero(param_count_, 1);
  double* base = params.data();
  Eigen::Index off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    double scale = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    for (Eigen::Index i = 0; i < sizes_[l] * sizes_[l + 1]; ++i)
      base[off + i] = scale * rng.normal();
    off += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];  // biases stay zero
  }
  return params;
}

Dataset make_blobs(Eigen::Index n_samples, Eigen::Index n_features, int n_classes, Rng& rng) {
  if (n_samples < 1 || n_features < 1 || n_classes < 1)
    throw std::invalid_argument("blob sizes must be >= 1");
  Eigen::MatrixXd centers(n_classes, n_features);
  for (Eigen::Index i = 0; i < centers.size(); ++i)
    centers.data()[i] = 0.25 + 0.5 * rng.uniform();
  Dataset ds;
  ds.X.resize(n_samples, n_features);
  ds.labels.resize(n_samples);
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    int c = static_cast<int>(i % n_classes);
    ds.labels(i) = c;
    for (Eigen::Index j = 0; j < n_features; ++j)
      ds.X(i, j) = std::clamp(centers(c, j) + 0.08 * rng.normal(), 0.0, 1.0);
  }
  return ds;
}

}  // namespace asim
