// Plain-loop reimplementation of the network recursions, independent of the
// library's Eigen code paths. Used as the oracle for forward/backward,
// gradient, kernel and pseudo-network tests, plus a central-difference
// gradient checker.
#pragma once

#include <cmath>
#include <vector>

#include "pntk/network.hpp"
#include "pntk/propagation.hpp"

namespace naive {

using Mat = std::vector<std::vector<double>>;

struct Net {
  int L = 0;
  int d0 = 0;
  std::vector<int> rows, cols;  // per layer h=1..L+1, index h-1
  std::vector<Mat> w, m;        // same indexing; m entries in {0, s}
};

inline Net from_state(const pntk::NetworkState& state) {
  Net net;
  const auto& config = state.config();
  net.L = config.depth_L;
  net.d0 = config.input_dim;
  for (int h = 1; h <= net.L + 1; ++h) {
    const int r = config.layer_rows(h);
    const int c = config.layer_cols(h);
    net.rows.push_back(r);
    net.cols.push_back(c);
    Mat w(static_cast<size_t>(r), std::vector<double>(static_cast<size_t>(c)));
    Mat m = w;
    const auto mask = state.mask_matrix(h);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        w[static_cast<size_t>(i)][static_cast<size_t>(j)] = state.weights(h)(i, j);
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] = mask(i, j);
      }
    net.w.push_back(std::move(w));
    net.m.push_back(std::move(m));
  }
  return net;
}

struct Fwd {
  std::vector<std::vector<double>> f;  // f[h], h=1..L+1 (index h-1)
  std::vector<std::vector<double>> g;  // g[h], h=0..L (index h)
  std::vector<std::vector<double>> D;  // D[h], h=1..L (index h-1)
  double out = 0.0;
};

inline Fwd forward(const Net& net, const std::vector<double>& x) {
  Fwd fwd;
  fwd.g.push_back(x);
  for (int h = 1; h <= net.L + 1; ++h) {
    const size_t li = static_cast<size_t>(h - 1);
    const int r = net.rows[li];
    const int c = net.cols[li];
    std::vector<double> f(static_cast<size_t>(r), 0.0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        f[static_cast<size_t>(i)] += net.w[li][static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                     net.m[li][static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                     fwd.g[static_cast<size_t>(h - 1)][static_cast<size_t>(j)];
    if (h <= net.L) {
      std::vector<double> g(static_cast<size_t>(r));
      std::vector<double> D(static_cast<size_t>(r));
      const double norm = std::sqrt(2.0 / r);
      for (int i = 0; i < r; ++i) {
        D[static_cast<size_t>(i)] = f[static_cast<size_t>(i)] > 0.0 ? 1.0 : 0.0;
        g[static_cast<size_t>(i)] =
            norm * (f[static_cast<size_t>(i)] > 0.0 ? f[static_cast<size_t>(i)] : 0.0);
      }
      fwd.g.push_back(std::move(g));
      fwd.D.push_back(std::move(D));
    } else {
      fwd.out = f[0];
    }
    fwd.f.push_back(std::move(f));
  }
  return fwd;
}

// b[h], h=1..L+1 (index h-1), b[L+1] = {1}.
inline std::vector<std::vector<double>> backward(const Net& net, const Fwd& fwd) {
  std::vector<std::vector<double>> b(static_cast<size_t>(net.L) + 1);
  b[static_cast<size_t>(net.L)] = {1.0};
  for (int h = net.L; h >= 1; --h) {
    const size_t li = static_cast<size_t>(h - 1);
    const int d_h = net.rows[li];
    const size_t up = static_cast<size_t>(h);  // layer h+1 storage index
    std::vector<double> bh(static_cast<size_t>(d_h), 0.0);
    const double norm = std::sqrt(2.0 / d_h);
    for (int i = 0; i < d_h; ++i) {
      double acc = 0.0;
      for (int k = 0; k < net.rows[up]; ++k)
        acc += net.w[up][static_cast<size_t>(k)][static_cast<size_t>(i)] *
               net.m[up][static_cast<size_t>(k)][static_cast<size_t>(i)] *
               b[up][static_cast<size_t>(k)];
      bh[static_cast<size_t>(i)] = norm * fwd.D[li][static_cast<size_t>(i)] * acc;
    }
    b[li] = std::move(bh);
  }
  return b;
}

inline Mat gradient(const Net& net, const Fwd& fwd,
                    const std::vector<std::vector<double>>& b, int h) {
  const size_t li = static_cast<size_t>(h - 1);
  Mat grad(static_cast<size_t>(net.rows[li]),
           std::vector<double>(static_cast<size_t>(net.cols[li]), 0.0));
  for (int i = 0; i < net.rows[li]; ++i)
    for (int j = 0; j < net.cols[li]; ++j)
      grad[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          b[li][static_cast<size_t>(i)] *
          fwd.g[static_cast<size_t>(h - 1)][static_cast<size_t>(j)] *
          net.m[li][static_cast<size_t>(i)][static_cast<size_t>(j)];
  return grad;
}

inline double ntk(const Net& net, const std::vector<double>& x,
                  const std::vector<double>& x2) {
  const Fwd fx = forward(net, x);
  const Fwd fx2 = forward(net, x2);
  const auto bx = backward(net, fx);
  const auto bx2 = backward(net, fx2);
  double total = 0.0;
  for (int h = 1; h <= net.L + 1; ++h) {
    const Mat ga = gradient(net, fx, bx, h);
    const Mat gb = gradient(net, fx2, bx2, h);
    for (size_t i = 0; i < ga.size(); ++i)
      for (size_t j = 0; j < ga[i].size(); ++j) total += ga[i][j] * gb[i][j];
  }
  return total;
}

struct Pseudo {
  std::vector<std::vector<double>> g;  // g^(h,j,h'), h'=h..L
  double out = 0.0;
};

inline Pseudo pseudo(const Net& net, const Fwd& host, int h, int j,
                     double alpha) {
  Pseudo ps;
  const size_t li = static_cast<size_t>(h - 1);
  const int d_h = net.rows[li];
  std::vector<double> g(static_cast<size_t>(d_h), 0.0);
  const double sqrt_alpha = std::sqrt(alpha);
  const double norm_h = std::sqrt(2.0 / d_h);
  for (int i = 0; i < d_h; ++i) {
    double denom = 0.0;
    for (int jj = 0; jj < net.cols[li]; ++jj) {
      const double v = net.m[li][static_cast<size_t>(i)][static_cast<size_t>(jj)] *
                       host.g[static_cast<size_t>(h - 1)][static_cast<size_t>(jj)];
      denom += v * v;
    }
    const double numer =
        net.m[li][static_cast<size_t>(i)][static_cast<size_t>(j)] * sqrt_alpha;
    if (numer == 0.0) continue;
    g[static_cast<size_t>(i)] = norm_h * host.D[li][static_cast<size_t>(i)] *
                                numer / denom * host.f[li][static_cast<size_t>(i)];
  }
  ps.g.push_back(g);
  for (int hp = h + 1; hp <= net.L; ++hp) {
    const size_t lp = static_cast<size_t>(hp - 1);
    const int d = net.rows[lp];
    std::vector<double> next(static_cast<size_t>(d), 0.0);
    const double norm = std::sqrt(2.0 / d);
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      for (int k = 0; k < net.cols[lp]; ++k)
        acc += net.w[lp][static_cast<size_t>(i)][static_cast<size_t>(k)] *
               net.m[lp][static_cast<size_t>(i)][static_cast<size_t>(k)] *
               g[static_cast<size_t>(k)];
      next[static_cast<size_t>(i)] =
          norm * host.D[lp][static_cast<size_t>(i)] * acc;
    }
    g = std::move(next);
    ps.g.push_back(g);
  }
  const size_t lo = static_cast<size_t>(net.L);
  double out = 0.0;
  for (int k = 0; k < net.cols[lo]; ++k)
    out += net.w[lo][0][static_cast<size_t>(k)] * net.m[lo][0][static_cast<size_t>(k)] *
           g[static_cast<size_t>(k)];
  ps.out = out;
  return ps;
}

/// Max relative error between the library's analytic layer gradients and
/// central finite differences of the naive forward, over every weight.
inline double max_gradient_fd_error(const pntk::NetworkState& state,
                                    const pntk::InputPoint& x,
                                    double step = 1e-5,
                                    double abs_floor = 1e-10) {
  Net net = from_state(state);
  const std::vector<double> xv(x.coords.data(), x.coords.data() + x.coords.size());
  const pntk::ForwardTrace ft = forward_pass(state, x);
  const pntk::BackwardTrace bt = backward_pass(state, ft);
  double worst = 0.0;
  for (int h = 1; h <= net.L + 1; ++h) {
    const pntk::RowMatrix analytic = layer_gradient(state, ft, bt, h);
    const size_t li = static_cast<size_t>(h - 1);
    for (int i = 0; i < net.rows[li]; ++i)
      for (int j = 0; j < net.cols[li]; ++j) {
        double& wref = net.w[li][static_cast<size_t>(i)][static_cast<size_t>(j)];
        const double saved = wref;
        wref = saved + step;
        const double up = forward(net, xv).out;
        wref = saved - step;
        const double down = forward(net, xv).out;
        wref = saved;
        const double fd = (up - down) / (2.0 * step);
        const double a = analytic(i, j);
        const double err =
            std::abs(fd - a) / std::max({std::abs(a), std::abs(fd), abs_floor});
        worst = std::max(worst, err);
      }
  }
  return worst;
}

}  // namespace naive
