#pragma once

#include <string>

#include "asim/fcn.hpp"

namespace asim {

// IDX-format readers (big-endian headers, magic 0x00000803 for images and
// 0x00000801 for labels). Pixel values are scaled to [0, 1].
Eigen::MatrixXd read_idx_images(const std::string& path);
Eigen::VectorXi read_idx_labels(const std::string& path);

// Loads the deterministic first-`subset_size` training samples from a
// directory holding the standard MNIST files (train-images-idx3-ubyte,
// train-labels-idx1-ubyte; the dotted variants are also accepted).
// subset_size = 0 keeps every sample.
Dataset load_mnist_subset(const std::string& dir, Eigen::Index subset_size);

}  // namespace asim
