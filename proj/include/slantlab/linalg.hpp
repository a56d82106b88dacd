#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string_view>

namespace slantlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Largest absolute entry; 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Orthogonal projector onto the column span of a matrix with orthonormal columns.
inline Mat projector(const Mat& orthonormal_columns, Eigen::Index dim) {
  if (orthonormal_columns.cols() == 0) return Mat::Zero(dim, dim);
  return orthonormal_columns * orthonormal_columns.transpose();
}

/// Deterministic generator for sampling fields, vectors and instances.
///
/// Doubles are derived from the raw 64-bit stream directly rather than via
/// <random> distributions, whose algorithms are implementation-defined; this
/// keeps reports byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec normal_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Vec unit_vector(Eigen::Index n) {
    Vec v = normal_vector(n);
    while (v.norm() < 1e-12) v = normal_vector(n);
    return v.normalized();
  }

  /// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
  Mat orthogonal(Eigen::Index n) {
    Mat g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Mat> qr(g);
    return qr.householderQ() * Mat::Identity(n, n);
  }

 private:
  std::uint64_t state_;
};

/// Mixes a string into a seed so per-task streams do not depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace slantlab
