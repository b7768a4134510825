#include "seqrank/regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "seqrank/log.hpp"

namespace seqrank {

namespace {

constexpr double kMinDiagonal = 1e-12;

bool finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

// One EWRLS update of `coef` (rows = outputs) against regressor `z` and
// target `target`, with inverse-covariance surrogate `cov`.
void ewrls_update(Eigen::MatrixXd& coef, Eigen::MatrixXd& cov, const Eigen::VectorXd& z,
                  const Eigen::VectorXd& target, double tau, Stabilisation stabilisation) {
  const Eigen::VectorXd cz = cov * z;
  const double r = 1.0 + z.dot(cz) / tau;
  const Eigen::VectorXd gain = cz / (r * tau);
  const Eigen::VectorXd error = target - coef * z;
  coef.noalias() += error * gain.transpose();
  cov = cov / tau - r * gain * gain.transpose();
  if (stabilisation == Stabilisation::rescale) cov *= tau;
  cov = 0.5 * (cov + cov.transpose()).eval();
}

}  // namespace

std::string to_string(Stabilisation s) { return s == Stabilisation::rescale ? "rescale" : "none"; }

Stabilisation parse_stabilisation(std::string_view text) {
  if (text == "rescale") return Stabilisation::rescale;
  if (text == "none") return Stabilisation::none;
  throw std::invalid_argument("unknown stabilisation '" + std::string(text) + "'");
}

CurdsWhey::CurdsWhey(std::size_t d, double lambda, double tau, Stabilisation stabilisation)
    : d_(d), lambda_(lambda), tau_(tau), stabilisation_(stabilisation) {
  if (d < 1) throw std::invalid_argument("curds-whey needs d >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("ridge penalty must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("forgetting factor must satisfy 0 < tau <= 1");
  const auto n = static_cast<Eigen::Index>(d);
  theta_ = Eigen::MatrixXd::Zero(n, n + 1);
  p_ = Eigen::MatrixXd::Identity(n + 1, n + 1) / lambda;
  phi_ = Eigen::MatrixXd::Zero(n, n);
  q_ = Eigen::MatrixXd::Identity(n, n) / lambda;
  x_prev_ = Eigen::VectorXd::Zero(n + 1);
  x_prev_[0] = 1.0;
  y_prev_ = Eigen::VectorXd::Zero(n);
}

CurdsWhey CurdsWhey::from_snapshot(const CwSnapshot& s) {
  CurdsWhey cw(s.d, s.lambda, s.tau, s.stabilisation);
  const auto n = static_cast<Eigen::Index>(s.d);
  if (s.theta.rows() != n || s.theta.cols() != n + 1 || s.p.rows() != n + 1 || s.p.cols() != n + 1 ||
      s.phi.rows() != n || s.phi.cols() != n || s.q.rows() != n || s.q.cols() != n ||
      s.x_prev.size() != n + 1 || s.y_prev.size() != n)
    throw std::invalid_argument("curds-whey snapshot has inconsistent shapes");
  if (!finite(s.theta) || !finite(s.p) || !finite(s.phi) || !finite(s.q))
    throw std::invalid_argument("curds-whey snapshot contains non-finite values");
  cw.steps_ = s.steps;
  cw.resets_ = s.resets;
  cw.theta_ = s.theta;
  cw.p_ = s.p;
  cw.phi_ = s.phi;
  cw.q_ = s.q;
  cw.x_prev_ = s.x_prev;
  cw.y_prev_ = s.y_prev;
  return cw;
}

CwSnapshot CurdsWhey::snapshot() const {
  return {d_, lambda_, tau_, stabilisation_, steps_, resets_, theta_, p_, phi_, q_, x_prev_, y_prev_};
}

void CurdsWhey::check_input(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != d_ + 1)
    throw std::invalid_argument("predictor vector has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(d_ + 1));
  if (x[0] != 1.0) throw std::invalid_argument("predictor vector must start with the constant 1");
  if (!x.allFinite()) throw std::invalid_argument("predictor vector must be finite");
}

Forecast CurdsWhey::step(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_input(x);
  if (static_cast<std::size_t>(y.size()) != d_)
    throw std::invalid_argument("target vector has length " + std::to_string(y.size()) + ", expected " +
                                std::to_string(d_));
  if (!y.allFinite()) throw std::invalid_argument("target vector must be finite");

  Forecast out;
  if (steps_ > 0) {
    ewrls_update(theta_, p_, x_prev_, y, tau_, stabilisation_);
    out.y_hat = theta_ * x;
    ewrls_update(phi_, q_, y_prev_, out.y_hat, tau_, stabilisation_);
  } else {
    out.y_hat = theta_ * x;
  }
  out.y_tilde = phi_ * out.y_hat;

  const auto n = static_cast<Eigen::Index>(d_);
  if (p_.diagonal().minCoeff() < kMinDiagonal || !finite(p_)) {
    log::warn("curds-whey: P lost positivity at step " + std::to_string(steps_ + 1) + "; reset to I/lambda");
    p_ = Eigen::MatrixXd::Identity(n + 1, n + 1) / lambda_;
    ++resets_;
  }
  if (q_.diagonal().minCoeff() < kMinDiagonal || !finite(q_)) {
    log::warn("curds-whey: Q lost positivity at step " + std::to_string(steps_ + 1) + "; reset to I/lambda");
    q_ = Eigen::MatrixXd::Identity(n, n) / lambda_;
    ++resets_;
  }

  x_prev_ = x;
  y_prev_ = y;
  ++steps_;
  return out;
}

Forecast CurdsWhey::forecast(const Eigen::VectorXd& x) const {
  check_input(x);
  Forecast out;
  out.y_hat = theta_ * x;
  out.y_tilde = phi_ * out.y_hat;
  return out;
}

Eigen::MatrixXd batch_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda) {
  if (x.rows() < 1 || x.rows() != y.rows()) throw std::invalid_argument("batch_ridge: row counts must match and be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("batch_ridge: lambda must be positive");
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += lambda;
  return gram.ldlt().solve(x.transpose() * y);
}

Eigen::MatrixXd batch_shrinkage(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat, double lambda) {
  return batch_ridge(y, y_hat, lambda);
}

}  // namespace seqrank
