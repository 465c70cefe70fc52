#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smartskin/error.hpp"

namespace smartskin {

struct PodResult {
  Eigen::VectorXd mean;          // ensemble mean field
  Eigen::MatrixXd modes;         // spatial modes as orthonormal columns
  Eigen::MatrixXd coefficients;  // row m holds a^(m)(t_n) over snapshots n
  Eigen::VectorXd eigenvalues;   // temporal correlation eigenvalues of the retained modes
  Eigen::VectorXd energy;        // fraction of fluctuation energy per mode
  Eigen::VectorXd cumulative_energy;

  /// Mean plus the first `count` modes (all retained modes by default).
  Eigen::MatrixXd reconstruct(Eigen::Index count = -1) const {
    if (count < 0 || count > modes.cols()) count = modes.cols();
    Eigen::MatrixXd out = modes.leftCols(count) * coefficients.topRows(count);
    out.colwise() += mean;
    return out;
  }
};

/// Snapshot POD of a field sampled at M instants; snapshots are the columns of the input.
///
/// Modes whose eigenvalue falls below `relative_tolerance` times the largest one are dropped.
inline PodResult snapshot_pod(const Eigen::MatrixXd& snapshots, double relative_tolerance = 1e-10) {
  if (snapshots.cols() < 2) throw DomainError("snapshot_pod needs at least 2 snapshots");
  if (snapshots.rows() < 1) throw DomainError("snapshot_pod: empty snapshots");
  PodResult r;
  r.mean = snapshots.rowwise().mean();
  const Eigen::MatrixXd x = snapshots.colwise() - r.mean;
  const Eigen::MatrixXd c = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) throw DomainError("snapshot_pod: eigendecomposition failed");

  const Eigen::Index m = c.rows();
  const double largest = eig.eigenvalues()(m - 1);
  Eigen::Index kept = 0;
  const double scale = std::max(x.cwiseAbs().maxCoeff(), 1.0);
  while (kept < m) {
    const double lambda = eig.eigenvalues()(m - 1 - kept);
    if (!(lambda > relative_tolerance * largest) || !(lambda > 1e-24 * scale * scale)) break;
    ++kept;
  }

  r.eigenvalues.resize(kept);
  Eigen::MatrixXd phi(x.rows(), kept);
  for (Eigen::Index j = 0; j < kept; ++j) {
    r.eigenvalues(j) = eig.eigenvalues()(m - 1 - j);
    phi.col(j) = x * eig.eigenvectors().col(m - 1 - j) / std::sqrt(r.eigenvalues(j));
  }
  // One Gram-Schmidt pass removes the round-off left by the division above.
  for (Eigen::Index j = 0; j < kept; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) phi.col(j) -= phi.col(i).dot(phi.col(j)) * phi.col(i);
    phi.col(j).normalize();
    Eigen::Index arg = 0;
    phi.col(j).cwiseAbs().maxCoeff(&arg);
    if (phi(arg, j) < 0) phi.col(j) = -phi.col(j);
  }
  r.modes = phi;
  r.coefficients = phi.transpose() * x;

  const double total = r.eigenvalues.sum();
  r.energy = kept > 0 ? Eigen::VectorXd(r.eigenvalues / total) : Eigen::VectorXd();
  r.cumulative_energy.resize(kept);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < kept; ++j) r.cumulative_energy(j) = (acc += r.energy(j));
  return r;
}

/// Convenience overload for snapshots held as separate vectors of equal length.
inline PodResult snapshot_pod(const std::vector<std::vector<double>>& snapshots, double relative_tolerance = 1e-10) {
  if (snapshots.size() < 2) throw DomainError("snapshot_pod needs at least 2 snapshots");
  const std::size_t n = snapshots.front().size();
  Eigen::MatrixXd s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(snapshots.size()));
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    if (snapshots[t].size() != n) {
      throw DomainError("snapshot_pod: snapshot " + std::to_string(t) + " has length " +
                        std::to_string(snapshots[t].size()) + ", expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = snapshots[t][i];
  }
  return snapshot_pod(s, relative_tolerance);
}

}  // namespace smartskin
