#pragma once

#include <Eigen/Dense>
#include <vector>

// Small dense building blocks for the solvers: Euclidean projection onto a
// polyhedron by a primal active-set method, and Lawson-Hanson nonnegative
// least squares for KKT multiplier recovery. Problems here are desk scale
// (tens of variables), so dense factorizations are the simple, robust choice.
namespace ecoop::detail {

// Minimizes ||x - v||^2 over { x >= 0, A x <= b }. Requires b >= 0 so the
// origin is feasible. Ties and degenerate active sets are broken by lowest
// row index; the minimizer itself is unique.
Eigen::VectorXd project_polyhedron(const Eigen::VectorXd& v,
                                   const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& b);

// Minimizes ||G m - g|| subject to m >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& G, const Eigen::VectorXd& g);

}  // namespace ecoop::detail
