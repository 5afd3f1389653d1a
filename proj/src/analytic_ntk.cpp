#include "pntk/analytic_ntk.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pntk/errors.hpp"

namespace pntk {
namespace {

constexpr double kRhoClampTol = 1e-9;

}  // namespace

ReluDual relu_dual(double s11, double s12, double s22) {
  if (s11 < 0.0 || s22 < 0.0)
    throw NumericError("covariance diagonal must be nonnegative");
  const double prod = s11 * s22;
  if (prod <= 0.0) {
    // Degenerate branch: one marginal is a point mass at 0.
    return {0.0, 0.5};
  }
  const double denom = std::sqrt(prod);
  double rho = s12 / denom;
  if (rho > 1.0 + kRhoClampTol || rho < -1.0 - kRhoClampTol) {
    std::ostringstream msg;
    msg << "correlation " << rho << " outside [-1, 1]";
    throw NumericError(msg.str());
  }
  rho = std::clamp(rho, -1.0, 1.0);
  const double pi = std::numbers::pi;
  const double theta = std::acos(rho);
  ReluDual out;
  out.e_pair = denom / pi * (std::sin(theta) + (pi - theta) * rho);
  out.e_dot = (pi - theta) / pi;
  return out;
}

ReluDual relu_dual(const Eigen::Matrix2d& cov) {
  return relu_dual(cov(0, 0), cov(0, 1), cov(1, 1));
}

AnalyticKernel kernel_recursion(const InputPoint& x, const InputPoint& x2,
                                int depth_L) {
  if (x.dim() != x2.dim()) throw ShapeError("input dimensions differ");
  if (depth_L < 1) throw ConfigError("depth_L must be at least 1");
  AnalyticKernel k;
  k.depth_L = depth_L;
  const size_t n = static_cast<size_t>(depth_L) + 1;
  k.sigma.resize(n);
  k.sigma_xx.resize(n);
  k.sigma_yy.resize(n);
  k.sigma_dot.resize(n);
  k.lambda.resize(n);
  k.sigma[0] = x.coords.dot(x2.coords);
  k.sigma_xx[0] = x.coords.squaredNorm();
  k.sigma_yy[0] = x2.coords.squaredNorm();
  for (int h = 1; h <= depth_L; ++h) {
    const size_t i = static_cast<size_t>(h);
    Eigen::Matrix2d lam;
    lam << k.sigma_xx[i - 1], k.sigma[i - 1], k.sigma[i - 1], k.sigma_yy[i - 1];
    k.lambda[i] = lam;
    const ReluDual cross = relu_dual(lam);
    k.sigma[i] = cross.e_pair;
    k.sigma_dot[i] = cross.e_dot;
    k.sigma_xx[i] =
        relu_dual(k.sigma_xx[i - 1], k.sigma_xx[i - 1], k.sigma_xx[i - 1]).e_pair;
    k.sigma_yy[i] =
        relu_dual(k.sigma_yy[i - 1], k.sigma_yy[i - 1], k.sigma_yy[i - 1]).e_pair;
  }
  // theta_inf = sum_h Sigma^(h-1) prod_{h'=h}^{L+1} SigmaDot^(h'), with the
  // output-layer factor SigmaDot^(L+1) = 1. Accumulated top-down so each
  // suffix product is formed once.
  double suffix = 1.0;
  double total = k.sigma[static_cast<size_t>(depth_L)];
  for (int h = depth_L; h >= 1; --h) {
    suffix *= k.sigma_dot[static_cast<size_t>(h)];
    total += k.sigma[static_cast<size_t>(h - 1)] * suffix;
  }
  k.theta_inf = total;
  return k;
}

double pruned_limit(const AnalyticKernel& kernel, double alpha, bool rescaled) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw ConfigError("alpha must lie in (0, 1]");
  if (rescaled) return kernel.theta_inf;
  return std::pow(alpha, kernel.depth_L) * kernel.theta_inf;
}

double ntk_regress(const Eigen::MatrixXd& gram, const Vector& kvec,
                   const Vector& y, double jitter) {
  const Eigen::Index n = gram.rows();
  if (gram.cols() != n) throw ShapeError("gram matrix must be square");
  if (kvec.size() != n || y.size() != n)
    throw ShapeError("kvec/y length must match gram size");
  if (jitter < 0.0) throw ConfigError("jitter must be nonnegative");
  if (!y.allFinite()) throw ShapeError("targets must be finite");
  const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if (asym > 1e-9 * scale) throw ShapeError("gram matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericError("eigendecomposition of gram matrix failed");
  const Vector evals = es.eigenvalues();
  const double lambda_max = evals.maxCoeff();
  const double lambda_min = evals.minCoeff();
  if (jitter == 0.0) {
    if (lambda_max <= 0.0 || lambda_min <= 1e-12 * lambda_max) {
      std::ostringstream msg;
      msg << "singular gram matrix (jitter disabled); eigenvalue range ["
          << lambda_min << ", " << lambda_max << "], condition estimate "
          << (lambda_min > 0.0 ? lambda_max / lambda_min
                               : std::numeric_limits<double>::infinity());
      throw NumericError(msg.str());
    }
  }
  const Vector shifted = evals.array() + jitter;
  const Vector coeffs =
      es.eigenvectors() *
      ((es.eigenvectors().transpose() * y).array() / shifted.array()).matrix();
  return kvec.dot(coeffs);
}

Eigen::MatrixXd ntk_gram_analytic(std::span<const InputPoint> inputs,
                                  int depth_L) {
  const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double value =
          kernel_recursion(inputs[static_cast<size_t>(i)],
                           inputs[static_cast<size_t>(j)], depth_L)
              .theta_inf;
      gram(i, j) = value;
      gram(j, i) = value;
    }
  return gram;
}

}  // namespace pntk
