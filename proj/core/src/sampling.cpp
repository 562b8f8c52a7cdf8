#include "pictk/sampling.hpp"

#include <bit>
#include <cmath>

namespace pictk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (auto& x : v) x = gaussian(rng);
  return v;
}

Vector random_unit_vector(Rng& rng, int n) {
  Vector v;
  double len = 0.0;
  do {
    v = random_vector(rng, n);
    len = vnorm(v);
  } while (len < 1e-6);
  for (auto& x : v) x /= len;
  return v;
}

FormElement random_form(Rng& rng, int n, int degree) {
  FormElement f(n);
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (degree >= 0 && std::popcount(m) != degree) continue;
    f[m] = cplx(gaussian(rng), gaussian(rng));
  }
  return f;
}

FormElement random_real_form(Rng& rng, int n, int degree) {
  FormElement f(n);
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (degree >= 0 && std::popcount(m) != degree) continue;
    f[m] = gaussian(rng);
  }
  return f;
}

SymBilinear random_symmetric(Rng& rng, int n) {
  SymBilinear h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h(i, j) = h(j, i) = gaussian(rng);
    }
  }
  return h;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

SymBilinear random_symmetric_spectrum(Rng& rng, int n, double lo, double hi) {
  Eigen::MatrixXd q = random_orthogonal(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(rng, lo, hi);
  SymBilinear h = q * d.asDiagonal() * q.transpose();
  return 0.5 * (h + h.transpose());
}

Frame4 random_frame(Rng& rng, int n) {
  Eigen::MatrixXd q = random_orthogonal(rng, n);
  return Frame4{q.leftCols(4)};
}

CurvTensor random_curvature(Rng& rng, int n, int terms) {
  CurvTensor R(n);
  for (int t = 0; t < terms; ++t) {
    SymBilinear h = random_symmetric(rng, n);
    const double s = (rng() & 1u) ? 1.0 : -1.0;
    R += (0.5 * s / terms) * kulkarni_nomizu(h, h);
  }
  return R;
}

CurvTensor random_positive_kn_curvature(Rng& rng, int n, int terms) {
  CurvTensor R(n);
  for (int t = 0; t < terms; ++t) {
    SymBilinear h = random_symmetric_spectrum(rng, n, 0.05, 2.0);
    SymBilinear k = random_symmetric_spectrum(rng, n, 0.05, 2.0);
    R += uniform(rng, 0.1, 1.0) * kulkarni_nomizu(h, k);
  }
  return R;
}

}  // namespace pictk
