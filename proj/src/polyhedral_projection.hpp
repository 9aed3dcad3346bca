#pragma once

#include "sweepdescent/types.hpp"

namespace sweepdescent::detail {

/// Euclidean projection of x onto {y : A y <= b}.
///
/// Solves the dual  min_{lambda >= 0} 1/2 |A^T lambda|^2 - lambda^T (A x - b)
/// with a Lawson-Hanson active-set iteration; the primal point is
/// x - A^T lambda. Rows of A are expected to be unit normals.
Point project_onto_polyhedron(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Point& x);

}  // namespace sweepdescent::detail
