#pragma once

// Curds-and-whey multivariate regression with exponentially weighted
// recursive least-squares updating, plus the batch ridge and shrinkage
// estimators it converges to.
//
// Each step trains on the lagged pair (x_{t-1}, y_t) so that the model maps
// today's predictors to tomorrow's targets:
//
//   r     = 1 + x'P x / tau                 (x = x_{t-1})
//   k     = P x / (r tau)
//   Theta = Theta + (y_t - Theta x) k'
//   P     = P / tau - r k k'
//   P     = tau * P                         (variance stabilisation)
//   y_hat = Theta x_t
//
// and symmetrically for the shrinkage matrix, which regresses y_hat_t on
// y_{t-1} with its own inverse-covariance surrogate Q:
//
//   s     = 1 + y'Q y / tau                 (y = y_{t-1})
//   m     = Q y / (s tau)
//   Phi   = Phi + (y_hat_t - Phi y) m'
//   Q     = Q / tau - s m m'
//   Q     = tau * Q
//   y_til = Phi y_hat_t
//
// With the stabilisation applied to the updated matrix, P^{-1} grows as
// lambda I + sum_i x_i x_i' / tau: every pair carries the same weight and the
// fit is batch ridge with penalty lambda * tau. Stabilisation::none drops the
// rescaling, which gives classic exponentially weighted RLS with
// P^{-1} = tau^t lambda I + sum_i tau^{t-i} x_i x_i'. Both coincide at tau = 1.

#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace seqrank {

enum class Stabilisation {
  rescale,  // P <- tau * P after the downdate
  none,     // classic exponential forgetting
};

std::string to_string(Stabilisation s);
Stabilisation parse_stabilisation(std::string_view text);

struct Forecast {
  Eigen::VectorXd y_hat;    // first stage, Theta x
  Eigen::VectorXd y_tilde;  // shrunk, Phi y_hat
};

// Full recursion state; matrices use the orientation of CurdsWhey.
struct CwSnapshot {
  std::size_t d = 0;
  double lambda = 1.0;
  double tau = 1.0;
  Stabilisation stabilisation = Stabilisation::rescale;
  std::size_t steps = 0;
  std::size_t resets = 0;
  Eigen::MatrixXd theta;  // d x (d + 1)
  Eigen::MatrixXd p;      // (d + 1) x (d + 1)
  Eigen::MatrixXd phi;    // d x d
  Eigen::MatrixXd q;      // d x d
  Eigen::VectorXd x_prev;
  Eigen::VectorXd y_prev;
};

class CurdsWhey {
 public:
  // Requires d >= 1, lambda > 0, 0 < tau <= 1.
  CurdsWhey(std::size_t d, double lambda, double tau, Stabilisation stabilisation = Stabilisation::rescale);

  static CurdsWhey from_snapshot(const CwSnapshot& snapshot);
  CwSnapshot snapshot() const;

  // x has length d + 1 with x[0] == 1; y has length d. The first call has no
  // previous pair to learn from and only primes x_prev / y_prev.
  Forecast step(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  // Read-only prediction with the current matrices.
  Forecast forecast(const Eigen::VectorXd& x) const;

  std::size_t dimension() const { return d_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  Stabilisation stabilisation() const { return stabilisation_; }
  std::size_t steps() const { return steps_; }
  // Times P or Q was reset to I / lambda after losing positivity.
  std::size_t resets() const { return resets_; }

  const Eigen::MatrixXd& theta() const { return theta_; }
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::MatrixXd& phi() const { return phi_; }
  const Eigen::MatrixXd& q() const { return q_; }

 private:
  void check_input(const Eigen::VectorXd& x) const;

  std::size_t d_;
  double lambda_;
  double tau_;
  Stabilisation stabilisation_;
  std::size_t steps_ = 0;
  std::size_t resets_ = 0;
  Eigen::MatrixXd theta_;
  Eigen::MatrixXd p_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd q_;
  Eigen::VectorXd x_prev_;
  Eigen::VectorXd y_prev_;
};

// (X'X + lambda I)^{-1} X'Y, returned as a cols(X) x cols(Y) matrix B with
// Y ~ X B. Solved by Cholesky (LDLT) on the regularised normal equations.
// CurdsWhey::theta() corresponds to B transposed.
Eigen::MatrixXd batch_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda);

// (Y'Y + lambda I)^{-1} Y'Y_hat; CurdsWhey::phi() corresponds to the transpose.
Eigen::MatrixXd batch_shrinkage(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat, double lambda);

}  // namespace seqrank
