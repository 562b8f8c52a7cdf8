#include "pictk/grid.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pictk/error.hpp"
#include "pictk/sampling.hpp"

namespace pictk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mask_sign(std::uint32_t mask, std::uint32_t bit) {
  return (std::popcount(mask & (bit - 1u)) & 1) ? -1.0 : 1.0;
}

// dst += scale * theta^i ^ src
void add_eps(const double* src, double* dst, int i, double scale, std::size_t slots) {
  const std::uint32_t bit = 1u << i;
  for (std::uint32_t m = 0; m < slots; ++m) {
    if ((m & bit) || src[m] == 0.0) continue;
    dst[m | bit] += scale * mask_sign(m, bit) * src[m];
  }
}

// dst += scale * i_{e_i} src
void add_iota(const double* src, double* dst, int i, double scale, std::size_t slots) {
  const std::uint32_t bit = 1u << i;
  for (std::uint32_t m = 0; m < slots; ++m) {
    if (!(m & bit) || src[m] == 0.0) continue;
    dst[m ^ bit] += scale * mask_sign(m, bit) * src[m];
  }
}

double dot_slots(const double* a, const double* b, std::size_t slots) {
  double s = 0.0;
  for (std::size_t m = 0; m < slots; ++m) s += a[m] * b[m];
  return s;
}

double poly(const std::vector<double>& c, double r) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * r + c[i];
  return v;
}

double dpoly(const std::vector<double>& c, double r) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) v = v * r + static_cast<double>(i) * c[i];
  return v;
}

double d2poly(const std::vector<double>& c, double r) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 2;) {
    v = v * r + static_cast<double>(i * (i - 1)) * c[i];
  }
  return v;
}

double phase_of(const TrigTerm& t, const Vector& x, double ell) {
  double th = t.phase;
  for (std::size_t i = 0; i < t.k.size(); ++i) th += kTwoPi * t.k[i] * x[i] / ell;
  return th;
}

void require_same_grid(const FlatBandGrid& a, const FlatBandGrid& b) {
  if (a.n != b.n || a.Nr != b.Nr || a.Nt != b.Nt || a.L != b.L || a.ell != b.ell) {
    throw std::invalid_argument("fields live on different grids");
  }
}

TrigTerm term_from_json(const nlohmann::json& j, int n, bool with_basis) {
  TrigTerm t;
  if (with_basis) {
    t.mask = MultiIndex(n, j.at("basis").get<std::vector<int>>()).mask();
  }
  t.amp = j.value("amp", 1.0);
  t.k = j.value("k", std::vector<int>(n - 1, 0));
  if (static_cast<int>(t.k.size()) != n - 1) {
    throw InputError("trig term needs n-1 transverse frequencies");
  }
  t.phase = j.value("phase", 0.0);
  t.radial = j.value("radial", std::vector<double>{1.0});
  return t;
}

nlohmann::json term_to_json(const TrigTerm& t, int n, bool with_basis) {
  nlohmann::json j = {{"amp", t.amp}, {"k", t.k}, {"phase", t.phase}, {"radial", t.radial}};
  if (with_basis) j["basis"] = MultiIndex::from_mask(n, t.mask).indices();
  return j;
}

}  // namespace

FlatBandGrid FlatBandGrid::make(int n, double L, int Nr, int Nt, double ell) {
  return make(n, L, Nr, std::vector<int>(std::max(n - 1, 0), Nt), ell);
}

FlatBandGrid FlatBandGrid::make(int n, double L, int Nr, std::vector<int> Nt, double ell) {
  FlatBandGrid g;
  g.n = n;
  g.L = L;
  g.Nr = Nr;
  g.Nt = std::move(Nt);
  g.ell = ell;
  g.validate();
  return g;
}

void FlatBandGrid::validate() const {
  if (n < 2 || n > kMaxDim) throw InputError("grid dimension out of range");
  if (!(L > 0)) throw InputError("grid needs L > 0");
  if (Nr < 8) throw InputError("grid needs N_r >= 8");
  if (static_cast<int>(Nt.size()) != n - 1) {
    throw InputError("grid needs one transverse resolution per direction");
  }
  for (int t : Nt) {
    if (t < 1) throw InputError("transverse resolution must be >= 1");
  }
  if (!(ell > 0)) throw InputError("grid needs ell > 0");
}

double FlatBandGrid::spacing(int dir) const {
  return dir == n - 1 ? h() : ell / Nt[dir];
}

std::size_t FlatBandGrid::nodes() const {
  std::size_t s = static_cast<std::size_t>(Nr);
  for (int t : Nt) s *= static_cast<std::size_t>(t);
  return s;
}

std::size_t FlatBandGrid::stride(int dir) const {
  // Radial index is fastest, then transverse directions in order.
  if (dir == n - 1) return 1;
  std::size_t s = static_cast<std::size_t>(Nr);
  for (int d = 0; d < dir; ++d) s *= static_cast<std::size_t>(Nt[d]);
  return s;
}

int FlatBandGrid::coord(std::size_t node, int dir) const {
  return static_cast<int>((node / stride(dir)) % static_cast<std::size_t>(extent(dir)));
}

double FlatBandGrid::position(std::size_t node, int dir) const {
  return coord(node, dir) * spacing(dir);
}

Vector FlatBandGrid::point(std::size_t node) const {
  Vector x(n);
  for (int d = 0; d < n; ++d) x[d] = position(node, d);
  return x;
}

double FlatBandGrid::weight(std::size_t node) const {
  const int r = coord(node, n - 1);
  double w = (r == 0 || r == Nr - 1) ? 0.5 * h() : h();
  return w * boundary_weight();
}

double FlatBandGrid::boundary_weight() const {
  double w = 1.0;
  for (int d = 0; d < n - 1; ++d) w *= spacing(d);
  return w;
}

FormField::FormField(const FlatBandGrid& g, int degree)
    : grid_(g), degree_(degree), slots_(std::size_t{1} << g.n),
      data_(g.nodes() * slots_, 0.0) {
  if (degree > g.n) throw std::invalid_argument("degree out of range");
}

FormElement FormField::node(std::size_t i) const {
  FormElement a(grid_.n);
  const double* p = at(i);
  for (std::size_t m = 0; m < slots_; ++m) a[static_cast<std::uint32_t>(m)] = p[m];
  return a;
}

void FormField::set_node(std::size_t i, const FormElement& a) {
  if (a.dim() != grid_.n) throw std::invalid_argument("form dimension mismatch");
  double* p = at(i);
  for (std::size_t m = 0; m < slots_; ++m) p[m] = a[static_cast<std::uint32_t>(m)].real();
}

FormField& FormField::operator+=(const FormField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  if (degree_ != o.degree_) degree_ = -1;
  return *this;
}

FormField& FormField::operator-=(const FormField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  if (degree_ != o.degree_) degree_ = -1;
  return *this;
}

FormField& FormField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

FormField operator+(FormField a, const FormField& b) { return a += b; }
FormField operator-(FormField a, const FormField& b) { return a -= b; }
FormField operator*(double s, FormField a) { return a *= s; }

int FieldSpec::degree() const {
  int k = -2;
  for (const auto& t : terms) {
    const int d = std::popcount(t.mask);
    if (k == -2) k = d;
    else if (k != d) return -1;
  }
  return k == -2 ? 0 : k;
}

FormElement FieldSpec::eval(const Vector& x) const {
  FormElement a(n);
  const double r = x[n - 1];
  for (const auto& t : terms) {
    a[t.mask] += t.amp * std::cos(phase_of(t, x, ell)) * poly(t.radial, r);
  }
  return a;
}

FieldSpec FieldSpec::from_json(const nlohmann::json& j, int n, double ell) {
  FieldSpec s;
  s.n = n;
  s.ell = ell;
  if (j.contains("random")) {
    const auto& r = j.at("random");
    std::vector<bool> active(n - 1, true);
    if (r.contains("active")) active = r.at("active").get<std::vector<bool>>();
    return random(n, ell, r.at("degree").get<int>(), r.value("terms", 4), active,
                  r.value("seed", std::uint64_t{1}));
  }
  for (const auto& t : j.at("terms")) s.terms.push_back(term_from_json(t, n, true));
  return s;
}

nlohmann::json FieldSpec::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms) arr.push_back(term_to_json(t, n, true));
  return {{"terms", arr}};
}

FieldSpec FieldSpec::random(int n, double ell, int degree, int terms,
                            const std::vector<bool>& active, std::uint64_t seed) {
  if (degree > n) throw std::invalid_argument("degree out of range");
  if (static_cast<int>(active.size()) != n - 1) {
    throw std::invalid_argument("active flags need n-1 entries");
  }
  Rng rng = make_rng(seed, 0x6e1d);
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (degree < 0 || std::popcount(m) == degree) masks.push_back(m);
  }
  FieldSpec s;
  s.n = n;
  s.ell = ell;
  std::uniform_int_distribution<std::size_t> pick(0, masks.size() - 1);
  std::uniform_int_distribution<int> freq(-1, 1);
  for (int t = 0; t < terms; ++t) {
    TrigTerm term;
    term.mask = masks[pick(rng)];
    term.amp = gaussian(rng);
    term.k.assign(n - 1, 0);
    for (int d = 0; d < n - 1; ++d) {
      if (active[d]) term.k[d] = freq(rng);
    }
    term.phase = uniform(rng, 0.0, kTwoPi);
    term.radial = {gaussian(rng), gaussian(rng), 0.5 * gaussian(rng), 0.25 * gaussian(rng)};
    s.terms.push_back(std::move(term));
  }
  return s;
}

double ScalarSpec::value(const Vector& x) const {
  double v = poly(radial, x[n - 1]);
  for (const auto& t : terms) {
    v += t.amp * std::cos(phase_of(t, x, ell)) * poly(t.radial, x[n - 1]);
  }
  return v;
}

Vector ScalarSpec::gradient(const Vector& x) const {
  Vector g(n, 0.0);
  const double r = x[n - 1];
  g[n - 1] = dpoly(radial, r);
  for (const auto& t : terms) {
    const double th = phase_of(t, x, ell);
    const double p = poly(t.radial, r);
    for (int i = 0; i < n - 1; ++i) {
      g[i] -= t.amp * std::sin(th) * kTwoPi * t.k[i] / ell * p;
    }
    g[n - 1] += t.amp * std::cos(th) * dpoly(t.radial, r);
  }
  return g;
}

SymBilinear ScalarSpec::hessian(const Vector& x) const {
  SymBilinear H = SymBilinear::Zero(n, n);
  const double r = x[n - 1];
  H(n - 1, n - 1) = d2poly(radial, r);
  for (const auto& t : terms) {
    const double th = phase_of(t, x, ell);
    const double p = poly(t.radial, r);
    const double dp = dpoly(t.radial, r);
    for (int i = 0; i < n - 1; ++i) {
      const double wi = kTwoPi * t.k[i] / ell;
      for (int j = 0; j < n - 1; ++j) {
        const double wj = kTwoPi * t.k[j] / ell;
        H(i, j) -= t.amp * std::cos(th) * wi * wj * p;
      }
      H(i, n - 1) -= t.amp * std::sin(th) * wi * dp;
      H(n - 1, i) -= t.amp * std::sin(th) * wi * dp;
    }
    H(n - 1, n - 1) += t.amp * std::cos(th) * d2poly(t.radial, r);
  }
  return H;
}

double ScalarSpec::laplacian(const Vector& x) const { return hessian(x).trace(); }

ScalarSpec ScalarSpec::from_json(const nlohmann::json& j, int n, double ell) {
  ScalarSpec s;
  s.n = n;
  s.ell = ell;
  s.radial = j.value("radial", std::vector<double>{});
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) s.terms.push_back(term_from_json(t, n, false));
  }
  return s;
}

nlohmann::json ScalarSpec::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms) arr.push_back(term_to_json(t, n, false));
  return {{"radial", radial}, {"terms", arr}};
}

FormField sample(const FlatBandGrid& g, const FieldSpec& s) {
  if (s.n != g.n) throw std::invalid_argument("field dimension mismatch");
  FormField F(g, std::max(s.degree(), -1));
  for (std::size_t i = 0; i < g.nodes(); ++i) F.set_node(i, s.eval(g.point(i)));
  return F;
}

ScalarField sample(const FlatBandGrid& g, const ScalarSpec& s) {
  if (s.n != g.n) throw std::invalid_argument("scalar dimension mismatch");
  ScalarField f{g, std::vector<double>(g.nodes())};
  for (std::size_t i = 0; i < g.nodes(); ++i) f.values[i] = s.value(g.point(i));
  return f;
}

namespace {

// Applies the first-derivative stencil along dir to a strided array with
// `width` doubles per node.
void diff(const FlatBandGrid& g, const double* src, double* dst, std::size_t width,
          int dir) {
  const std::size_t st = g.stride(dir);
  const int N = g.extent(dir);
  const double inv = 1.0 / (2.0 * g.spacing(dir));
  const bool radial = dir == g.n - 1;
  for (std::size_t node = 0; node < g.nodes(); ++node) {
    const int c = static_cast<int>((node / st) % static_cast<std::size_t>(N));
    const std::size_t base = node - static_cast<std::size_t>(c) * st;
    auto idx = [&](int k) { return (base + static_cast<std::size_t>(k) * st) * width; };
    double* out = dst + node * width;
    if (!radial) {
      if (N < 3) {
        for (std::size_t m = 0; m < width; ++m) out[m] = 0.0;
        continue;
      }
      const double* p = src + idx((c + 1) % N);
      const double* q = src + idx((c + N - 1) % N);
      for (std::size_t m = 0; m < width; ++m) out[m] = (p[m] - q[m]) * inv;
    } else if (c == 0) {
      const double* a = src + idx(0);
      const double* b = src + idx(1);
      const double* d = src + idx(2);
      for (std::size_t m = 0; m < width; ++m) out[m] = (-3.0 * a[m] + 4.0 * b[m] - d[m]) * inv;
    } else if (c == N - 1) {
      const double* a = src + idx(N - 1);
      const double* b = src + idx(N - 2);
      const double* d = src + idx(N - 3);
      for (std::size_t m = 0; m < width; ++m) out[m] = (3.0 * a[m] - 4.0 * b[m] + d[m]) * inv;
    } else {
      const double* p = src + idx(c + 1);
      const double* q = src + idx(c - 1);
      for (std::size_t m = 0; m < width; ++m) out[m] = (p[m] - q[m]) * inv;
    }
  }
}

std::vector<std::vector<double>> gradient_samples(const ScalarField& f) {
  std::vector<std::vector<double>> g(f.grid.n);
  for (int d = 0; d < f.grid.n; ++d) g[d] = partial(f, d);
  return g;
}

}  // namespace

FormField partial(const FormField& F, int dir) {
  const auto& g = F.grid();
  if (dir < 0 || dir >= g.n) throw std::out_of_range("direction out of range");
  FormField out(g, F.degree());
  diff(g, F.data().data(), out.data().data(), F.slots(), dir);
  return out;
}

std::vector<double> partial(const ScalarField& f, int dir) {
  if (dir < 0 || dir >= f.grid.n) throw std::out_of_range("direction out of range");
  std::vector<double> out(f.values.size());
  diff(f.grid, f.values.data(), out.data(), 1, dir);
  return out;
}

FormField d_grid(const FormField& F) {
  const auto& g = F.grid();
  if (F.degree() == g.n) return FormField(g, g.n);
  FormField out(g, F.degree() < 0 ? -1 : F.degree() + 1);
  for (int i = 0; i < g.n; ++i) {
    const FormField Di = partial(F, i);
    for (std::size_t node = 0; node < g.nodes(); ++node) {
      add_eps(Di.at(node), out.at(node), i, 1.0, F.slots());
    }
  }
  return out;
}

FormField dstar_grid(const FormField& F) {
  const auto& g = F.grid();
  if (F.degree() == 0) return FormField(g, 0);
  FormField out(g, F.degree() < 0 ? -1 : F.degree() - 1);
  for (int i = 0; i < g.n; ++i) {
    const FormField Di = partial(F, i);
    for (std::size_t node = 0; node < g.nodes(); ++node) {
      add_iota(Di.at(node), out.at(node), i, -1.0, F.slots());
    }
  }
  return out;
}

FormField laplacian_grid(const FormField& F) {
  FormField out(F.grid(), F.degree());
  for (int i = 0; i < F.grid().n; ++i) out += partial(partial(F, i), i);
  out.set_degree(F.degree());
  return out;
}

FormField dirac_clifford(const FormField& F) {
  const auto& g = F.grid();
  FormField out(g, -1);
  for (int i = 0; i < g.n; ++i) {
    const FormField Di = partial(F, i);
    for (std::size_t node = 0; node < g.nodes(); ++node) {
      const FormElement c = clifford_c_basis(i, Di.node(node));
      double* p = out.at(node);
      for (std::size_t m = 0; m < F.slots(); ++m) {
        p[m] += c[static_cast<std::uint32_t>(m)].real();
      }
    }
  }
  return out;
}

FormField D_f_grid(const FormField& F, const ScalarField& f) {
  require_same_grid(F.grid(), f.grid);
  if (f.values.size() != F.nodes()) throw std::invalid_argument("scalar shape mismatch");
  FormField out = d_grid(F) + dstar_grid(F);
  out.set_degree(-1);
  const auto grad = gradient_samples(f);
  for (int i = 0; i < F.grid().n; ++i) {
    for (std::size_t node = 0; node < F.nodes(); ++node) {
      const double gi = grad[i][node];
      if (gi == 0.0) continue;
      add_eps(F.at(node), out.at(node), i, gi, F.slots());
      add_iota(F.at(node), out.at(node), i, gi, F.slots());
    }
  }
  return out;
}

FormField scale_exp(const FormField& F, const ScalarField& f, double s) {
  require_same_grid(F.grid(), f.grid);
  FormField out = F;
  for (std::size_t node = 0; node < F.nodes(); ++node) {
    const double e = std::exp(s * f.values[node]);
    double* p = out.at(node);
    for (std::size_t m = 0; m < F.slots(); ++m) p[m] *= e;
  }
  return out;
}

double sup_norm(const FormField& F) { return sup_norm(F, 0, F.grid().Nr); }

double sup_norm(const FormField& F, int r_lo, int r_hi) {
  const auto& g = F.grid();
  double s = 0.0;
  for (std::size_t node = 0; node < F.nodes(); ++node) {
    const int r = g.coord(node, g.n - 1);
    if (r < r_lo || r >= r_hi) continue;
    const double* p = F.at(node);
    for (std::size_t m = 0; m < F.slots(); ++m) s = std::max(s, std::abs(p[m]));
  }
  return s;
}

double integrate_inner(const FormField& a, const FormField& b) {
  require_same_grid(a.grid(), b.grid());
  double s = 0.0;
  for (std::size_t node = 0; node < a.nodes(); ++node) {
    s += a.grid().weight(node) * dot_slots(a.at(node), b.at(node), a.slots());
  }
  return s;
}

double conjugation_residual(const FormField& F, const ScalarField& f) {
  const FormField lhs = D_f_grid(F, f);
  const FormField df = scale_exp(d_grid(scale_exp(F, f, 1.0)), f, -1.0);
  const FormField dsf = scale_exp(dstar_grid(scale_exp(F, f, -1.0)), f, 1.0);
  return sup_norm(lhs - df - dsf);
}

double dirac_paths_residual(const FormField& F) {
  return sup_norm(dirac_clifford(F) - (d_grid(F) + dstar_grid(F)));
}

double green_residual_dirac(const FormField& alpha, const FormField& beta,
                            const ScalarField& f) {
  require_same_grid(alpha.grid(), beta.grid());
  const auto& g = alpha.grid();
  const double lhs = integrate_inner(D_f_grid(alpha, f), beta);
  const double rhs_bulk = integrate_inner(alpha, D_f_grid(beta, f));
  // Outward normal: +e_n at r = L, -e_n at r = 0.
  const int nd = g.n - 1;
  const std::size_t slots = alpha.slots();
  std::vector<double> tmp(slots);
  double boundary = 0.0;
  for (std::size_t node = 0; node < g.nodes(); ++node) {
    const int r = g.coord(node, nd);
    if (r != 0 && r != g.Nr - 1) continue;
    const double s = r == 0 ? -1.0 : 1.0;
    std::fill(tmp.begin(), tmp.end(), 0.0);
    add_eps(alpha.at(node), tmp.data(), nd, s, slots);
    add_iota(alpha.at(node), tmp.data(), nd, -s, slots);
    boundary += g.boundary_weight() * dot_slots(tmp.data(), beta.at(node), slots);
  }
  return std::abs(lhs - rhs_bulk - boundary);
}

double green_residual_laplace(const FormField& alpha, const FormField& beta) {
  require_same_grid(alpha.grid(), beta.grid());
  const auto& g = alpha.grid();
  const double lhs = -integrate_inner(laplacian_grid(alpha), beta);
  double grad = 0.0;
  FormField Dr;
  for (int i = 0; i < g.n; ++i) {
    FormField Da = partial(alpha, i);
    grad += integrate_inner(Da, partial(beta, i));
    if (i == g.n - 1) Dr = std::move(Da);
  }
  double boundary = 0.0;
  for (std::size_t node = 0; node < g.nodes(); ++node) {
    const int r = g.coord(node, g.n - 1);
    if (r != 0 && r != g.Nr - 1) continue;
    const double s = r == 0 ? -1.0 : 1.0;
    boundary += g.boundary_weight() * s * dot_slots(Dr.at(node), beta.at(node), alpha.slots());
  }
  return std::abs(lhs - grad + boundary);
}

double twisted_weitzenboeck_residual(const FormField& omega, const ScalarSpec& fs,
                                     double margin) {
  if (!(margin >= 0.0 && margin < 0.5)) throw std::invalid_argument("margin must lie in [0, 1/2)");
  const auto& g = omega.grid();
  const ScalarField f = sample(g, fs);
  const FormField D2 = D_f_grid(D_f_grid(omega, f), f);
  const FormField Lap = laplacian_grid(omega);
  const std::size_t slots = omega.slots();
  std::vector<std::vector<double>> iw(g.n, std::vector<double>(slots));
  double worst = 0.0;
  for (std::size_t node = 0; node < g.nodes(); ++node) {
    const int r = g.coord(node, g.n - 1);
    if (r < 2 || r > g.Nr - 3) continue;
    const double t = r * g.h() / g.L;
    if (t < margin - 1e-12 || t > 1.0 - margin + 1e-12) continue;
    const Vector x = g.point(node);
    const Vector grad = fs.gradient(x);
    const SymBilinear H = fs.hessian(x);
    const double* w = omega.at(node);
    const double w2 = dot_slots(w, w, slots);
    double g2 = 0.0;
    for (double v : grad) g2 += v * v;
    for (int i = 0; i < g.n; ++i) {
      std::fill(iw[i].begin(), iw[i].end(), 0.0);
      add_iota(w, iw[i].data(), i, 1.0, slots);
    }
    double hess = 0.0;
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (H(i, j) != 0.0) hess += H(i, j) * dot_slots(iw[i].data(), iw[j].data(), slots);
      }
    }
    const double lhs = dot_slots(D2.at(node), w, slots);
    const double rhs = -dot_slots(Lap.at(node), w, slots) + (g2 - H.trace()) * w2 + 2.0 * hess;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double chi_eigenform_boundary_identity(const FormElement& omega, const Vector& gradf,
                                       const Vector& nu, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const FormElement chi = chi_involution(nu, omega);
  if (max_abs_diff(chi, static_cast<double>(sign) * omega) > 1e-10) {
    throw std::domain_error("omega is not a chi-eigenform with the given sign");
  }
  const cplx lhs = inner(clifford_ct(gradf, clifford_c(nu, omega)), omega);
  return std::abs(lhs.real() - sign * dot(gradf, nu) * omega.norm2());
}

double contraction_trace_identity(const SymBilinear& H, const FormElement& omega) {
  const int n = omega.dim();
  if (H.rows() != n || H.cols() != n) throw std::invalid_argument("shape mismatch");
  std::vector<FormElement> iw, ew;
  for (int i = 0; i < n; ++i) {
    iw.push_back(interior_basis(i, omega));
    ew.push_back(wedge_basis(i, omega));
  }
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (H(i, j) == 0.0) continue;
      s += H(i, j) * (inner(iw[i], iw[j]) + inner(ew[i], ew[j]));
    }
  }
  return std::abs(s - H.trace() * omega.norm2());
}

GridConfig GridConfig::from_json(const nlohmann::json& j) {
  try {
    GridConfig c;
    const int n = j.at("n").get<int>();
    const double L = j.value("L", 1.0);
    const int Nr = j.value("N_r", 32);
    const double ell = j.value("ell", 1.0);
    std::vector<int> Nt;
    if (j.contains("N_t") && j.at("N_t").is_array()) {
      Nt = j.at("N_t").get<std::vector<int>>();
    } else {
      Nt.assign(std::max(n - 1, 0), j.value("N_t", 8));
    }
    c.grid = FlatBandGrid::make(n, L, Nr, Nt, ell);
    if (j.contains("fields")) {
      for (const auto& f : j.at("fields")) c.fields.push_back(FieldSpec::from_json(f, n, ell));
    }
    c.f = j.contains("f") ? ScalarSpec::from_json(j.at("f"), n, ell) : ScalarSpec{n, ell, {}, {}};
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed grid config: " + std::string(e.what()));
  }
}

GridConfig GridConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grid config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed grid config: " + std::string(e.what()));
  }
  return from_json(j);
}

nlohmann::json GridConfig::to_json() const {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : fields) fs.push_back(f.to_json());
  return {{"n", grid.n}, {"L", grid.L}, {"N_r", grid.Nr}, {"N_t", grid.Nt},
          {"ell", grid.ell}, {"fields", fs}, {"f", f.to_json()}};
}

std::vector<std::string> ConvergenceStudy::families() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.family) == out.end()) out.push_back(r.family);
  }
  return out;
}

std::vector<double> ConvergenceStudy::orders(const std::string& family) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.family == family && !std::isnan(r.order)) out.push_back(r.order);
  }
  return out;
}

ConvergenceStudy convergence_study(const GridConfig& base, int levels) {
  if (levels < 2) throw std::invalid_argument("need at least two levels");
  const FlatBandGrid& g0 = base.grid;
  std::vector<bool> active(g0.n - 1);
  for (int d = 0; d < g0.n - 1; ++d) active[d] = g0.Nt[d] > 1;
  std::vector<FieldSpec> fields = base.fields;
  for (std::uint64_t s = fields.size(); fields.size() < 2; ++s) {
    fields.push_back(FieldSpec::random(g0.n, g0.ell, -1, 8, active, 0x91d + s));
  }
  const char* names[] = {"conjugation", "green_dirac", "green_laplace", "twisted_weitzenboeck"};
  ConvergenceStudy study;
  std::vector<double> prev(4, std::numeric_limits<double>::quiet_NaN());
  double prev_h = 0.0;
  for (int j = 0; j < levels; ++j) {
    std::vector<int> Nt = g0.Nt;
    for (int& t : Nt) {
      if (t > 1) t <<= j;
    }
    const FlatBandGrid g =
        FlatBandGrid::make(g0.n, g0.L, g0.Nr << j, Nt, g0.ell);
    const FormField a = sample(g, fields[0]);
    const FormField b = sample(g, fields[1]);
    const ScalarField f = sample(g, base.f);
    const double res[4] = {conjugation_residual(a, f), green_residual_dirac(a, b, f),
                           green_residual_laplace(a, b),
                           twisted_weitzenboeck_residual(a, base.f)};
    for (int k = 0; k < 4; ++k) {
      ConvergenceRow row;
      row.family = names[k];
      row.h = g.h();
      row.residual = res[k];
      row.order = j == 0 ? std::numeric_limits<double>::quiet_NaN()
                         : std::log(prev[k] / res[k]) / std::log(prev_h / g.h());
      study.rows.push_back(row);
      prev[k] = res[k];
    }
    prev_h = g.h();
  }
  return study;
}

}  // namespace pictk
