#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "pictk/curvature.hpp"
#include "pictk/error.hpp"
#include "pictk/sampling.hpp"

namespace pictk {

namespace {

struct Objective {
  Eigen::MatrixXd M;
  int n;

  static Eigen::VectorXd bivec(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.size());
    Eigen::VectorXd w(n * (n - 1) / 2);
    int p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) w(p++) = a(i) * b(j) - a(j) * b(i);
    return w;
  }

  Eigen::MatrixXd antisym(const Eigen::VectorXd& g) const {
    Eigen::MatrixXd G(n, n);
    int p = 0;
    for (int i = 0; i < n; ++i) {
      G(i, i) = 0.0;
      for (int j = i + 1; j < n; ++j) {
        G(i, j) = g(p);
        G(j, i) = -g(p);
        ++p;
      }
    }
    return G;
  }

  double value(const Eigen::MatrixXd& F) const {
    const Eigen::VectorXd w13 = bivec(F.col(0), F.col(2));
    const Eigen::VectorXd w14 = bivec(F.col(0), F.col(3));
    const Eigen::VectorXd w23 = bivec(F.col(1), F.col(2));
    const Eigen::VectorXd w24 = bivec(F.col(1), F.col(3));
    const Eigen::VectorXd w12 = bivec(F.col(0), F.col(1));
    const Eigen::VectorXd w34 = bivec(F.col(2), F.col(3));
    return w13.dot(M * w13) + w14.dot(M * w14) + w23.dot(M * w23) +
           w24.dot(M * w24) - 2.0 * w12.dot(M * w34);
  }

  // Euclidean gradient with respect to the n x 4 matrix F.
  double value_grad(const Eigen::MatrixXd& F, Eigen::MatrixXd& grad) const {
    grad.setZero(n, 4);
    double v = 0.0;
    auto quad = [&](int a, int b) {
      const Eigen::VectorXd w = bivec(F.col(a), F.col(b));
      const Eigen::VectorXd Mw = M * w;
      v += w.dot(Mw);
      const Eigen::MatrixXd G = antisym(2.0 * Mw);
      grad.col(a) += G * F.col(b);
      grad.col(b) -= G * F.col(a);
    };
    quad(0, 2);
    quad(0, 3);
    quad(1, 2);
    quad(1, 3);
    const Eigen::VectorXd w12 = bivec(F.col(0), F.col(1));
    const Eigen::VectorXd w34 = bivec(F.col(2), F.col(3));
    const Eigen::VectorXd Mw12 = M * w12;
    const Eigen::VectorXd Mw34 = M * w34;
    v -= 2.0 * w12.dot(Mw34);
    const Eigen::MatrixXd G12 = antisym(-2.0 * Mw34);
    const Eigen::MatrixXd G34 = antisym(-2.0 * Mw12);
    grad.col(0) += G12 * F.col(1);
    grad.col(1) -= G12 * F.col(0);
    grad.col(2) += G34 * F.col(3);
    grad.col(3) -= G34 * F.col(2);
    return v;
  }
};

// QR retraction with positive diagonal in R.
Eigen::MatrixXd retract(const Eigen::MatrixXd& X) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), 4);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(4).triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) {
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  }
  return Q;
}

struct RestartResult {
  double value = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd frame;
  long evaluations = 0;
};

RestartResult descend(const Objective& obj, Rng& rng, const SearchConfig& cfg) {
  const int n = obj.n;
  Eigen::MatrixXd X(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 4; ++j) X(i, j) = gaussian(rng);
  Eigen::MatrixXd F = retract(X);

  RestartResult out;
  Eigen::MatrixXd G;
  double val = obj.value_grad(F, G);
  ++out.evaluations;
  out.value = val;
  out.frame = F;

  double step = 0.1;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Eigen::Matrix4d S = F.transpose() * G;
    const Eigen::MatrixXd rg = G - F * (0.5 * (S + S.transpose()));
    const double gn2 = rg.squaredNorm();
    if (std::sqrt(gn2) < cfg.grad_tol) break;

    step = std::min(2.0 * step, 1.0);
    bool accepted = false;
    Eigen::MatrixXd Fn;
    double vn = 0.0;
    while (step > 1e-18) {
      Fn = retract(F - step * rg);
      vn = obj.value(Fn);
      ++out.evaluations;
      if (vn < out.value) {
        out.value = vn;
        out.frame = Fn;
      }
      if (vn <= val - 1e-4 * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    F = Fn;
    val = obj.value_grad(F, G);
    ++out.evaluations;
    if (val < out.value) {
      out.value = val;
      out.frame = F;
    }
  }
  return out;
}

}  // namespace

MinIsoResult min_isotropic(const CurvTensor& R, const SearchConfig& cfg) {
  const int n = R.dim();
  if (n < 4) throw DimensionError("isotropic curvature needs n >= 4");
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be positive");

  const Objective obj{R.bivector_matrix(), n};
  std::vector<RestartResult> results(cfg.restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < cfg.restarts; r = next++) {
      Rng rng(splitmix64(cfg.seed + static_cast<std::uint64_t>(r)));
      results[r] = descend(obj, rng, cfg);
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MinIsoResult best;
  best.restarts = cfg.restarts;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    best.evaluations += results[r].evaluations;
    // Ties keep the lowest restart index.
    if (results[r].value < best.value) {
      best.value = results[r].value;
      best.best_restart = r;
    }
  }
  best.argmin = Frame4{results[best.best_restart].frame};
  return best;
}

PicVerdict is_sigma_pic(const CurvTensor& R, double sigma,
                        const SearchConfig& cfg) {
  if (sigma < 0) throw std::invalid_argument("sigma must be nonnegative");
  const MinIsoResult m = min_isotropic(R, cfg);
  PicVerdict v;
  v.sigma = sigma;
  v.min_found = m.value;
  v.witness = m.argmin;
  v.restarts = m.restarts;
  v.evaluations = m.evaluations;
  v.pass = m.value >= sigma - cfg.tolerance;
  return v;
}

}  // namespace pictk
