#include "ecoop/kkt.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ecoop/feasibility.hpp"
#include "ecoop/qp.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/tolerances.hpp"

namespace ecoop {

namespace {

// One multiplier column: its stationarity coefficients and the slack of the
// constraint it prices (complementarity pairs the two).
struct Column {
  Eigen::VectorXd coeff;
  double slack = 0.0;
  enum Kind { Lambda, Mu, Eta, Rho, Bound } kind = Lambda;
  int index = 0;
};

}  // namespace

KktReport kkt_residuals(const Scenario& s, std::pair<double, double> theta,
                        const PowerSchedule& p1, const PowerSchedule& p2,
                        const TransferSchedule& delta) {
  s.validate();
  const std::size_t t = s.slots();
  if (p1.slots() != t || p2.slots() != t || delta.slots() != t) {
    throw std::invalid_argument("schedule length mismatch");
  }
  if (!feasibility_violations(s, p1, p2, delta).empty()) {
    throw std::invalid_argument("KKT residuals need a feasible candidate");
  }
  if (s.model == Model::Relay &&
      !data_causality_violations(p1, p2).empty()) {
    throw std::invalid_argument("KKT residuals need a feasible candidate");
  }

  const std::vector<double> e1 = s.e1_snr().amounts;
  const std::vector<double> e2 = s.e2_snr().amounts;
  const std::vector<double> c1 = cumulative_sum(e1);
  const std::vector<double> c2 = cumulative_sum(e2);
  const std::vector<double> q1 = p1.cumulative();
  const std::vector<double> q2 = p2.cumulative();
  const std::vector<double> qd = delta.cumulative();
  const double alpha = s.alpha;

  const int n = static_cast<int>(3 * t);  // stationarity rows: p1, p2, delta

  // Objective gradient in bits.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  const double th1 = theta.first, th2 = theta.second;
  switch (s.model) {
    case Model::Relay:
      for (std::size_t i = 0; i < t; ++i) {
        grad[static_cast<int>(t + i)] = rate_slope(p2[i]);
      }
      break;
    case Model::TwoWay:
      for (std::size_t i = 0; i < t; ++i) {
        grad[static_cast<int>(i)] = th1 * rate_slope(p1[i]);
        grad[static_cast<int>(t + i)] = th2 * rate_slope(p2[i]);
      }
      break;
    case Model::Mac:
      for (std::size_t i = 0; i < t; ++i) {
        double both = rate_slope(p1[i] + p2[i]);
        if (th1 >= th2) {
          grad[static_cast<int>(i)] = (th1 - th2) * rate_slope(p1[i]) + th2 * both;
          grad[static_cast<int>(t + i)] = th2 * both;
        } else {
          grad[static_cast<int>(i)] = th1 * both;
          grad[static_cast<int>(t + i)] = (th2 - th1) * rate_slope(p2[i]) + th1 * both;
        }
      }
      break;
  }

  std::vector<Column> cols;
  auto prefix_column = [&](int block, double scale, std::size_t k) {
    // d/dx of sum_{i<=k} x_i within one variable block.
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i <= k; ++i) {
      c[static_cast<int>(block * t + i)] = scale;
    }
    return c;
  };

  for (std::size_t k = 0; k < t; ++k) {
    Column lam;  // sum p1 + sum delta <= c1
    lam.coeff = prefix_column(0, 1.0, k) + prefix_column(2, 1.0, k);
    lam.slack = c1[k] - q1[k] - qd[k];
    lam.kind = Column::Lambda;
    lam.index = static_cast<int>(k);
    cols.push_back(lam);

    Column mu;  // sum p2 - alpha sum delta <= c2
    mu.coeff = prefix_column(1, 1.0, k) + prefix_column(2, -alpha, k);
    mu.slack = c2[k] + alpha * qd[k] - q2[k];
    mu.kind = Column::Mu;
    mu.index = static_cast<int>(k);
    cols.push_back(mu);

    Column eta;  // sum delta <= c1
    eta.coeff = prefix_column(2, 1.0, k);
    eta.slack = c1[k] - qd[k];
    eta.kind = Column::Eta;
    eta.index = static_cast<int>(k);
    cols.push_back(eta);
  }

  if (s.model == Model::Relay) {
    std::vector<double> r1(t), r2(t);
    for (std::size_t i = 0; i < t; ++i) {
      r1[i] = rate_of_power(p1[i]);
      r2[i] = rate_of_power(p2[i]);
    }
    const std::vector<double> b1 = cumulative_sum(r1);
    const std::vector<double> b2 = cumulative_sum(r2);
    for (std::size_t k = 0; k < t; ++k) {
      Column rho;  // sum rate(p2) - sum rate(p1) <= 0
      rho.coeff = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i <= k; ++i) {
        rho.coeff[static_cast<int>(i)] = -rate_slope(p1[i]);
        rho.coeff[static_cast<int>(t + i)] = rate_slope(p2[i]);
      }
      rho.slack = b1[k] - b2[k];
      rho.kind = Column::Rho;
      rho.index = static_cast<int>(k);
      cols.push_back(rho);
    }
  }

  // Bound multipliers only where the bound is active; their stationarity
  // coefficient is -1 (they subtract pressure at the floor).
  auto add_bounds = [&](int block, const std::vector<double>& vals) {
    for (std::size_t i = 0; i < t; ++i) {
      if (vals[i] <= tol::transfer_active) {
        Column nu;
        nu.coeff = Eigen::VectorXd::Zero(n);
        nu.coeff[static_cast<int>(block * t + i)] = -1.0;
        nu.slack = vals[i];
        nu.kind = Column::Bound;
        nu.index = static_cast<int>(block * t + i);
        cols.push_back(nu);
      }
    }
  };
  add_bounds(0, p1.power);
  add_bounds(1, p2.power);
  add_bounds(2, delta.delta);

  const int m = static_cast<int>(cols.size());
  // Stationarity block plus a slack-penalty block steering complementarity:
  // minimizing ||G m - grad||^2 + sum (slack_j m_j)^2 prefers explanations
  // that put zero weight on inactive constraints.
  Eigen::MatrixXd g(n + m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  g.setZero();
  for (int j = 0; j < m; ++j) {
    g.block(0, j, n, 1) = cols[static_cast<std::size_t>(j)].coeff;
    g(n + j, j) = cols[static_cast<std::size_t>(j)].slack;
  }
  rhs.head(n) = grad;

  Eigen::VectorXd mult = detail::nnls(g, rhs);

  KktReport report;
  report.lambda.assign(t, 0.0);
  report.mu.assign(t, 0.0);
  report.eta.assign(t, 0.0);
  if (s.model == Model::Relay) report.rho.assign(t, 0.0);

  Eigen::VectorXd explained = Eigen::VectorXd::Zero(n);
  double comp = 0.0;
  for (int j = 0; j < m; ++j) {
    const Column& c = cols[static_cast<std::size_t>(j)];
    explained += mult[j] * c.coeff;
    comp = std::max(comp, std::abs(mult[j] * c.slack));
    switch (c.kind) {
      case Column::Lambda: report.lambda[static_cast<std::size_t>(c.index)] = mult[j]; break;
      case Column::Mu: report.mu[static_cast<std::size_t>(c.index)] = mult[j]; break;
      case Column::Eta: report.eta[static_cast<std::size_t>(c.index)] = mult[j]; break;
      case Column::Rho: report.rho[static_cast<std::size_t>(c.index)] = mult[j]; break;
      case Column::Bound: break;
    }
  }
  report.stationarity_residual = (explained - grad).lpNorm<Eigen::Infinity>();
  report.complementary_slackness_residual = comp;
  report.dual_feasibility_residual = 0.0;  // NNLS keeps multipliers >= 0
  return report;
}

}  // namespace ecoop
