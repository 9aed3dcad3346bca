#include "polyhedral_projection.hpp"

#include <vector>

#include "sweepdescent/errors.hpp"

namespace sweepdescent::detail {

Point project_onto_polyhedron(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Point& x) {
  const Eigen::Index m = A.rows();
  if (m == 0) return x;

  const Eigen::MatrixXd G = A * A.transpose();
  const Eigen::VectorXd h = A * x - b;
  const double tol = 1e-14 * std::max(1.0, h.cwiseAbs().maxCoeff());

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m; ++i)
      if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd Gp(n, n);
    Eigen::VectorXd hp(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      hp[r] = h[idx[static_cast<std::size_t>(r)]];
      for (Eigen::Index c = 0; c < n; ++c)
        Gp(r, c) = G(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    }
    const Eigen::VectorXd zp = Gp.completeOrthogonalDecomposition().solve(hp);
    z.setZero(m);
    for (Eigen::Index r = 0; r < n; ++r) z[idx[static_cast<std::size_t>(r)]] = zp[r];
  };

  const int max_outer = static_cast<int>(3 * m + 50);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = h - G * lambda;
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w[i] > best_w) {
        best_w = w[i];
        best = i;
      }
    }
    if (best < 0) return x - A.transpose() * lambda;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z;
    for (int inner = 0; inner < max_outer; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index i = 0; i < m; ++i)
        if (passive[static_cast<std::size_t>(i)] && z[i] <= 0.0) feasible = false;
      if (feasible) break;
      double step = 1.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (passive[static_cast<std::size_t>(i)] && z[i] <= 0.0) {
          const double denom = lambda[i] - z[i];
          if (denom > 0.0) step = std::min(step, lambda[i] / denom);
        }
      }
      lambda += step * (z - lambda);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (passive[static_cast<std::size_t>(i)] && lambda[i] <= 1e-15) {
          passive[static_cast<std::size_t>(i)] = false;
          lambda[i] = 0.0;
        }
      }
    }
    lambda = z.cwiseMax(0.0);
  }
  throw NonConvergence("polyhedral projection: active-set iteration did not terminate");
}

}  // namespace sweepdescent::detail
