#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smartskin/error.hpp"

namespace smartskin {

struct Embedding {
  Eigen::MatrixXd coordinates;  // one row per point, one column per retained axis
  Eigen::VectorXd eigenvalues;  // retained eigenvalues, largest first, possibly negative
  Eigen::VectorXd spectrum;     // full Gram spectrum, largest first
  bool negative_retained = false;
  double negative_mass = 0.0;   // sum of |negative eigenvalues|, a measure of non-Euclidean input
};

/// Double-centred Gram matrix B = -1/2 J D2 J of squared Euclidean distances.
inline Eigen::MatrixXd centred_gram(const std::vector<std::vector<double>>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const std::size_t dim = points.front().size();
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (points[static_cast<std::size_t>(i)].size() != dim) {
      throw DomainError("classical_mds: point " + std::to_string(i) + " has dimension " +
                        std::to_string(points[static_cast<std::size_t>(i)].size()) + ", expected " +
                        std::to_string(dim));
    }
    for (std::size_t d = 0; d < dim; ++d) x(i, static_cast<Eigen::Index>(d)) = points[static_cast<std::size_t>(i)][d];
  }
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) d2(i, j) = d2(j, i) = (x.row(i) - x.row(j)).squaredNorm();
  }
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b = d2;
  b.colwise() -= row_mean;
  b.rowwise() -= row_mean.transpose();
  b.array() += grand;
  return -0.5 * b;
}

/// Classical (Torgerson) MDS. Coordinates are eigenvectors scaled by sqrt(max(lambda, 0));
/// each axis is sign-fixed so its largest-magnitude entry is positive.
inline Embedding classical_mds(const std::vector<std::vector<double>>& points, std::size_t target_dim = 2) {
  if (points.size() < 3) throw DomainError("classical_mds needs at least 3 points");
  if (target_dim < 1 || target_dim > points.size()) throw DomainError("classical_mds: invalid target dimension");
  const Eigen::MatrixXd b = centred_gram(points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw DomainError("classical_mds: eigendecomposition failed");

  const Eigen::Index n = b.rows();
  const auto k = static_cast<Eigen::Index>(target_dim);
  Embedding e;
  e.spectrum = eig.eigenvalues().reverse();
  e.eigenvalues = e.spectrum.head(k);
  e.coordinates.resize(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - j);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    e.coordinates.col(j) = v * std::sqrt(std::max(e.eigenvalues(j), 0.0));
  }
  for (Eigen::Index j = 0; j < e.spectrum.size(); ++j) {
    if (e.spectrum(j) < 0) e.negative_mass -= e.spectrum(j);
  }
  e.negative_retained = (e.eigenvalues.array() < 0).any();
  return e;
}

}  // namespace smartskin
