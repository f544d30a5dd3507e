#include "asim/mnist.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace asim {

namespace {

std::uint32_t read_be_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw std::runtime_error("truncated IDX header");
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

std::string find_file(const std::string& dir, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    std::filesystem::path p = std::filesystem::path(dir) / name;
    if (std::filesystem::exists(p)) return p.string();
  }
  throw std::runtime_error("MNIST file not found under " + dir);
}

}  // namespace

Eigen::MatrixXd read_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (read_be_u32(in) != 0x00000803u) throw std::runtime_error("bad image magic in " + path);
  std::uint32_t n = read_be_u32(in);
  std::uint32_t h = read_be_u32(in);
  std::uint32_t w = read_be_u32(in);
  std::size_t pixels = std::size_t(n) * h * w;
  std::vector<unsigned char> raw(pixels);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(pixels));
  if (!in) throw std::runtime_error("truncated image data in " + path);
  Eigen::MatrixXd X(n, h * w);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < h * w; ++j)
      X(i, j) = raw[std::size_t(i) * h * w + j] / 255.0;
  return X;
}

Eigen::VectorXi read_idx_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (read_be_u32(in) != 0x00000801u) throw std::runtime_error("bad label magic in " + path);
  std::uint32_t n = read_be_u32(in);
  std::vector<unsigned char> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()), n);
  if (!in) throw std::runtime_error("truncated label data in " + path);
  Eigen::VectorXi y(n);
  for (std::uint32_t i = 0; i < n; ++i) y(i) = raw[i];
  return y;
}

Dataset load_mnist_subset(const std::string& dir, Eigen::Index subset_size) {
  std::string images = find_file(dir, {"train-images-idx3-ubyte", "train-images.idx3-ubyte"});
  std::string labels = find_file(dir, {"train-labels-idx1-ubyte", "train-labels.idx1-ubyte"});
  Dataset ds;
  ds.X = read_idx_images(images);
  ds.labels = read_idx_labels(labels);
  if (ds.labels.size() != ds.X.rows()) throw std::runtime_error("image/label count mismatch");
  if (subset_size > 0 && subset_size < ds.X.rows()) {
    ds.X = ds.X.topRows(subset_size).eval();
    ds.labels = ds.labels.head(subset_size).eval();
  }
  return ds;
}

}  // namespace asim
