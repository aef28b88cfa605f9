#include "ecoop/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecoop/qp.hpp"
#include "ecoop/tolerances.hpp"

namespace ecoop {

namespace {

constexpr double kArmijo = 1e-4;
constexpr long kIterationCap = 200000;

// Stacked constraint system A x <= b over x = (p1, p2, delta) >= 0.
void build_system(const CausalityPolytope& poly, Eigen::MatrixXd& a,
                  Eigen::VectorXd& b) {
  const int t = static_cast<int>(poly.slots());
  const std::vector<double> c1 = poly.e1.cumulative();
  const std::vector<double> c2 = poly.e2.cumulative();
  const int rows = poly.include_transfer_budget ? 3 * t : 2 * t;
  a = Eigen::MatrixXd::Zero(rows, 3 * t);
  b = Eigen::VectorXd::Zero(rows);
  for (int k = 0; k < t; ++k) {
    for (int i = 0; i <= k; ++i) {
      a(k, i) = 1.0;              // p1 prefix
      a(k, 2 * t + i) = 1.0;      // + delta prefix
      a(t + k, t + i) = 1.0;      // p2 prefix
      a(t + k, 2 * t + i) = -poly.alpha;
    }
    b[k] = c1[k];
    b[t + k] = c2[k];
    if (poly.include_transfer_budget) {
      for (int i = 0; i <= k; ++i) a(2 * t + k, 2 * t + i) = 1.0;
      b[2 * t + k] = c1[k];
    }
  }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  for (int i = 0; i < out.size(); ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Equality-constrained ascent step on the current active face, used once
// projected gradient has identified the neighbourhood of the optimum.
// Returns false when no Hessian is available.
bool polish(const ConcaveObjective& obj, const Eigen::MatrixXd& a,
            const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol) {
  if (!obj.hessian) return false;
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(a.rows());

  for (int round = 0; round < 120; ++round) {
    std::vector<double> xs = to_std(x);
    Eigen::VectorXd g = to_eigen(obj.gradient(xs));
    std::vector<std::vector<double>> hs = obj.hessian(xs);
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h(i, j) = hs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    // Tiny negative-definite shift keeps directions the objective ignores
    // (the transfer variables) from wandering.
    for (int i = 0; i < n; ++i) h(i, i) -= 1e-10;

    Eigen::VectorXd slack = b - a * x;
    std::vector<int> act_rows;
    for (int i = 0; i < m; ++i) {
      if (slack[i] <= 1e-8 * (1.0 + std::abs(b[i]))) act_rows.push_back(i);
    }
    std::vector<int> act_bounds;
    std::vector<bool> at_zero(n, false);
    for (int j = 0; j < n; ++j) {
      if (x[j] <= 1e-9) {
        act_bounds.push_back(j);
        at_zero[j] = true;
      }
    }

    // KKT system on the face: maximize the quadratic model subject to
    // active rows stationary and active bounds fixed.
    const int ma = static_cast<int>(act_rows.size());
    const int mb = static_cast<int>(act_bounds.size());
    const int dim = n + ma + mb;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    kkt.topLeftCorner(n, n) = h;
    rhs.head(n) = -g;
    for (int i = 0; i < ma; ++i) {
      kkt.block(n + i, 0, 1, n) = a.row(act_rows[i]);
      kkt.block(0, n + i, n, 1) = a.row(act_rows[i]).transpose();
    }
    for (int j = 0; j < mb; ++j) {
      kkt(n + ma + j, act_bounds[j]) = 1.0;
      kkt(act_bounds[j], n + ma + j) = 1.0;
    }
    Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd dx = sol.head(n);
    Eigen::VectorXd row_mult = -sol.segment(n, ma);
    Eigen::VectorXd bound_mult = -sol.tail(mb);

    double step_norm = dx.lpNorm<Eigen::Infinity>();
    if (step_norm <= tol) {
      // Face optimum: release the most violated dual sign, if any.
      int worst_row = -1, worst_bound = -1;
      double wr = -1e-8, wb = -1e-8;
      for (int i = 0; i < ma; ++i) {
        if (row_mult[i] < wr) { wr = row_mult[i]; worst_row = i; }
      }
      for (int j = 0; j < mb; ++j) {
        if (bound_mult[j] < wb) { wb = bound_mult[j]; worst_bound = j; }
      }
      if (worst_row < 0 && worst_bound < 0) return true;
      // Releasing means nudging off the face along the ascent direction;
      // re-run projected gradient style move away from the released row.
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
      if (worst_bound >= 0 && (worst_row < 0 || wb <= wr)) {
        dir[act_bounds[worst_bound]] = 1.0;
      } else {
        dir = -a.row(act_rows[worst_row]).transpose();
        for (int j = 0; j < n; ++j) {
          if (at_zero[j] && dir[j] < 0) dir[j] = 0.0;
        }
      }
      double cap = 1.0;
      for (int i = 0; i < m; ++i) {
        double ad = a.row(i).dot(dir);
        if (ad > 1e-12) cap = std::min(cap, slack[i] / ad * 0.5);
      }
      double f0 = obj.value(xs);
      Eigen::VectorXd cand = x + cap * dir;
      for (int j = 0; j < n; ++j) cand[j] = std::max(0.0, cand[j]);
      if (obj.value(to_std(cand)) > f0) {
        x = cand;
        continue;
      }
      return true;  // release does not ascend; accept current point
    }

    // Step within the face, cut at the first blocking inactive constraint.
    double tmax = 1.0;
    for (int i = 0; i < m; ++i) {
      bool active = false;
      for (int r : act_rows) if (r == i) { active = true; break; }
      if (active) continue;
      double ad = a.row(i).dot(dx);
      if (ad > 1e-12) tmax = std::min(tmax, slack[i] / ad);
    }
    for (int j = 0; j < n; ++j) {
      if (!at_zero[j] && dx[j] < -1e-12) {
        tmax = std::min(tmax, x[j] / (-dx[j]));
      }
    }
    double f0 = obj.value(xs);
    double tstep = std::max(0.0, tmax);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd cand = x + tstep * dx;
      for (int j = 0; j < n; ++j) cand[j] = std::max(0.0, cand[j]);
      double fc = obj.value(to_std(cand));
      if (fc >= f0 + kArmijo * tstep * g.dot(dx) && fc >= f0 - 1e-15) {
        x = cand;
        accepted = true;
        break;
      }
      tstep *= 0.5;
      if (tstep < 1e-16) break;
    }
    if (!accepted) return true;
  }
  return true;
}

}  // namespace

SolverResult maximize_concave_over_causality(const ConcaveObjective& objective,
                                             const CausalityPolytope& polytope,
                                             double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const int t = static_cast<int>(polytope.slots());
  const int n = 3 * t;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  build_system(polytope, a, b);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  double fx = objective.value(to_std(x));
  if (!std::isfinite(fx)) {
    throw std::invalid_argument("objective not finite at the origin");
  }

  double step = 1.0;
  long iters = 0;
  bool stalled = false;
  while (iters < kIterationCap) {
    ++iters;
    Eigen::VectorXd g = to_eigen(objective.gradient(to_std(x)));
    Eigen::VectorXd y;
    double fy = fx;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      y = detail::project_polyhedron(x + step * g, a, b);
      fy = objective.value(to_std(y));
      if (!std::isfinite(fy)) {
        throw std::invalid_argument("objective not finite on a feasible point");
      }
      double model = g.dot(y - x);
      if (fy >= fx + kArmijo * model && fy >= fx - 1e-15) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    double moved = (y - x).lpNorm<Eigen::Infinity>();
    x = y;
    fx = std::max(fx, fy);
    step = std::min(step * 1.6, 1e6);
    if (moved <= 1e-12 * std::max(1.0, x.lpNorm<Eigen::Infinity>())) break;
    if (iters % 64 == 0) {
      Eigen::VectorXd probe = detail::project_polyhedron(x + g, a, b);
      if ((probe - x).lpNorm<Eigen::Infinity>() <= tol * 0.1) break;
    }
  }

  polish(objective, a, b, x, std::min(tol * 1e-3, 1e-9));
  fx = objective.value(to_std(x));

  // Final certificate: unit-step projected gradient displacement.
  Eigen::VectorXd g = to_eigen(objective.gradient(to_std(x)));
  Eigen::VectorXd probe = detail::project_polyhedron(x + g, a, b);
  double residual = (probe - x).lpNorm<Eigen::Infinity>();

  SolverResult res;
  res.p1.power.assign(x.data(), x.data() + t);
  res.p2.power.assign(x.data() + t, x.data() + 2 * t);
  res.delta.delta.assign(x.data() + 2 * t, x.data() + n);
  auto clamp_zero = [](std::vector<double>& v) {
    for (double& z : v) z = std::max(0.0, z);
  };
  clamp_zero(res.p1.power);
  clamp_zero(res.p2.power);
  clamp_zero(res.delta.delta);
  res.objective = fx;
  res.iterations = iters;
  res.converged = residual <= tol && !(stalled && residual > tol);
  return res;
}

}  // namespace ecoop
