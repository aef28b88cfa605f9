#include "ecoop/qp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecoop::detail {

namespace {

constexpr double kActiveTol = 1e-11;

// Equality-constrained step of the active-set method. Variables in
// `fixed` are pinned at zero; rows in `rows` are pinned at their bound.
// Returns the minimizer of ||x - v|| on that face and the constraint-row
// multipliers (least-squares when rows are dependent).
struct FaceSolve {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // one per active row, aligned with `rows`
};

FaceSolve solve_face(const Eigen::VectorXd& v, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b, const std::vector<int>& rows,
                     const std::vector<bool>& fixed) {
  const int n = static_cast<int>(v.size());
  std::vector<int> free_idx;
  for (int j = 0; j < n; ++j) {
    if (!fixed[j]) free_idx.push_back(j);
  }
  const int nf = static_cast<int>(free_idx.size());
  const int m = static_cast<int>(rows.size());

  FaceSolve out;
  out.x = Eigen::VectorXd::Zero(n);
  out.lambda = Eigen::VectorXd::Zero(m);
  if (nf == 0) return out;

  Eigen::VectorXd vf(nf);
  for (int j = 0; j < nf; ++j) vf[j] = v[free_idx[j]];

  if (m == 0) {
    for (int j = 0; j < nf; ++j) out.x[free_idx[j]] = vf[j];
    return out;
  }

  Eigen::MatrixXd Af(m, nf);
  Eigen::VectorXd bw(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nf; ++j) Af(i, j) = A(rows[i], free_idx[j]);
    bw[i] = b[rows[i]];
  }

  // Unconstrained minimizer is vf; restore feasibility of the active rows:
  // x = vf - Af^T lambda with Af x = bw.
  Eigen::MatrixXd gram = Af * Af.transpose();
  Eigen::VectorXd rhs = Af * vf - bw;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
  out.lambda = cod.solve(rhs);
  Eigen::VectorXd xf = vf - Af.transpose() * out.lambda;
  for (int j = 0; j < nf; ++j) out.x[free_idx[j]] = xf[j];
  return out;
}

}  // namespace

Eigen::VectorXd project_polyhedron(const Eigen::VectorXd& v,
                                   const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& b) {
  const int n = static_cast<int>(v.size());
  const int m = static_cast<int>(A.rows());
  if (b.minCoeff() < -kActiveTol) {
    throw std::invalid_argument("projection needs a feasible origin");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<int> rows;
  std::vector<bool> fixed(n, false);

  const int max_iter = 60 * (n + m) + 200;
  for (int iter = 0; iter < max_iter; ++iter) {
    FaceSolve face = solve_face(v, A, b, rows, fixed);
    Eigen::VectorXd d = face.x - x;

    if (d.lpNorm<Eigen::Infinity>() <= kActiveTol) {
      // Face minimizer reached; check dual signs and release if needed.
      Eigen::VectorXd grad = x - v;  // objective gradient
      Eigen::VectorXd atl = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        atl += face.lambda[i] * A.row(rows[i]).transpose();
      }

      int worst_row = -1;
      double worst = -1e-9;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        if (face.lambda[i] < worst) {
          worst = face.lambda[i];
          worst_row = i;
        }
      }
      int worst_bound = -1;
      double worstb = -1e-9;
      for (int j = 0; j < n; ++j) {
        if (!fixed[j]) continue;
        double nu = grad[j] + atl[j];  // multiplier of x_j >= 0
        if (nu < worstb) {
          worstb = nu;
          worst_bound = j;
        }
      }

      if (worst_row < 0 && worst_bound < 0) return x;
      if (worst_row >= 0 && (worst_bound < 0 || worst <= worstb)) {
        rows.erase(rows.begin() + worst_row);
      } else {
        fixed[worst_bound] = false;
      }
      continue;
    }

    // Longest step along d that stays feasible.
    double alpha = 1.0;
    int block_row = -1, block_bound = -1;
    for (int i = 0; i < m; ++i) {
      bool active = false;
      for (int r : rows) {
        if (r == i) { active = true; break; }
      }
      if (active) continue;
      double ad = A.row(i).dot(d);
      if (ad > kActiveTol) {
        double room = b[i] - A.row(i).dot(x);
        double step = room / ad;
        if (step < alpha - 1e-15) {
          alpha = std::max(0.0, step);
          block_row = i;
          block_bound = -1;
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (fixed[j]) continue;
      if (d[j] < -kActiveTol) {
        double step = (0.0 - x[j]) / d[j];
        if (step < alpha - 1e-15) {
          alpha = std::max(0.0, step);
          block_bound = j;
          block_row = -1;
        }
      }
    }

    x += alpha * d;
    if (block_row >= 0) {
      rows.push_back(block_row);
    } else if (block_bound >= 0) {
      x[block_bound] = 0.0;
      fixed[block_bound] = true;
    }
    // alpha == 1 with no blocker loops back and terminates via the dual test.
  }
  return x;  // iteration cap; callers verify feasibility downstream
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& G, const Eigen::VectorXd& g) {
  const int n = static_cast<int>(G.cols());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);

  const double wtol = 1e-12 * std::max(1.0, g.norm());
  const int max_outer = 3 * n + 30;

  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::VectorXd w = G.transpose() * (g - G * m);
    int enter = -1;
    double best = wtol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      Eigen::MatrixXd Gp(G.rows(), idx.size());
      for (std::size_t c = 0; c < idx.size(); ++c) Gp.col(c) = G.col(idx[c]);
      Eigen::VectorXd z =
          Gp.completeOrthogonalDecomposition().solve(g);

      bool all_pos = true;
      double alpha = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        if (z[c] <= 0) {
          all_pos = false;
          double denom = m[idx[c]] - z[c];
          if (denom > 0) alpha = std::min(alpha, m[idx[c]] / denom);
        }
      }
      if (all_pos) {
        m.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) m[idx[c]] = z[c];
        break;
      }
      for (std::size_t c = 0; c < idx.size(); ++c) {
        m[idx[c]] += alpha * (z[c] - m[idx[c]]);
        if (m[idx[c]] <= 1e-14) {
          m[idx[c]] = 0.0;
          passive[idx[c]] = false;
        }
      }
    }
  }
  return m;
}

}  // namespace ecoop::detail
