#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "pntk/network.hpp"

namespace pntk {

/// c_sigma-scaled bivariate ReLU Gaussian moments.
struct ReluDual {
  double e_pair = 0.0;  ///< c_sigma E[relu(u) relu(v)]
  double e_dot = 0.0;   ///< c_sigma E[relu'(u) relu'(v)]
};

/// Closed-form arc-cosine moments for (u,v) ~ N(0, [[s11,s12],[s12,s22]]).
/// With rho = s12/sqrt(s11 s22) and theta = acos(rho):
///   e_pair = sqrt(s11 s22)/pi * (sin(theta) + (pi - theta) rho)
///   e_dot  = (pi - theta)/pi
/// rho is clamped to [-1,1] within 1e-9; beyond that throws NumericError.
/// Degenerate s11*s22 = 0: e_pair = 0 and e_dot = 1/2 by convention.
ReluDual relu_dual(double s11, double s12, double s22);
ReluDual relu_dual(const Eigen::Matrix2d& cov);

/// The layerwise Gaussian covariance recursion for one input pair, plus the
/// assembled infinite-width kernel
///   theta_inf = sum_{h=1}^{L+1} Sigma^(h-1) prod_{h'=h}^{L+1} SigmaDot^(h')
/// with SigmaDot^(L+1) := 1 (linear output layer). For unit x this makes
/// theta_inf(x,x) = L + 1.
struct AnalyticKernel {
  int depth_L = 0;
  std::vector<double> sigma;      ///< Sigma^(h)(x,x'), h = 0..L
  std::vector<double> sigma_xx;   ///< Sigma^(h)(x,x)
  std::vector<double> sigma_yy;   ///< Sigma^(h)(x',x')
  std::vector<double> sigma_dot;  ///< SigmaDot^(h)(x,x'), h = 1..L (slot 0 unused)
  std::vector<Eigen::Matrix2d> lambda;  ///< Lambda^(h), h = 1..L (slot 0 unused)
  double theta_inf = 0.0;
};

AnalyticKernel kernel_recursion(const InputPoint& x, const InputPoint& x2,
                                int depth_L);

/// Limit of the pruned network's kernel: alpha^L theta_inf without
/// rescaling, theta_inf with.
double pruned_limit(const AnalyticKernel& kernel, double alpha, bool rescaled);

/// Kernel ridge prediction kvec^T (gram + jitter I)^{-1} y. With jitter 0 a
/// numerically singular gram throws NumericError carrying a condition
/// estimate.
double ntk_regress(const Eigen::MatrixXd& gram, const Vector& kvec,
                   const Vector& y, double jitter = 0.0);

/// theta_inf Gram matrix over a dataset.
Eigen::MatrixXd ntk_gram_analytic(std::span<const InputPoint> inputs,
                                  int depth_L);

}  // namespace pntk
