#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mss/embed.hpp"

namespace mss {

Embedding fgsd_embed(const StaticGraph& g, const FgsdParams& params) {
  if (g.empty()) throw std::invalid_argument("fgsd_embed: empty graph");
  if (params.bins == 0 || !(params.range > 0.0)) throw std::invalid_argument("fgsd_embed: invalid histogram");
  const auto n = static_cast<Eigen::Index>(g.node_count());

  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto a = static_cast<Eigen::Index>(*g.local_index(e.u));
    const auto b = static_cast<Eigen::Index>(*g.local_index(e.v));
    laplacian(a, b) -= 1.0;
    laplacian(b, a) -= 1.0;
    laplacian(a, a) += 1.0;
    laplacian(b, b) += 1.0;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& phi = eig.eigenvectors();

  // Pseudoinverse over the non-zero spectrum.
  const double tol = 1e-9 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (lambda(j) > tol) inv(j) = 1.0 / lambda(j);
  const Eigen::MatrixXd pinv = phi * inv.asDiagonal() * phi.transpose();

  Embedding hist(params.bins, 0.0f);
  const double scale = static_cast<double>(params.bins) / params.range;
  const auto last = static_cast<std::int64_t>(params.bins) - 1;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const double s = x == y ? 0.0 : pinv(x, x) + pinv(y, y) - 2.0 * pinv(x, y);
      // the small offset keeps values that are exact bucket edges up to
      // rounding (e.g. 1.0 from K2) in the bucket they start
      auto b = static_cast<std::int64_t>(std::floor(s * scale + 1e-9));
      hist[static_cast<std::size_t>(std::clamp<std::int64_t>(b, 0, last))] += 1.0f;
    }
  }
  return hist;
}

}  // namespace mss
