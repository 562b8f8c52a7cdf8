#include <cmath>
#include <fstream>

#include "pictk/curvature.hpp"
#include "pictk/error.hpp"

namespace pictk {

CurvTensor curvature_from_json(const nlohmann::json& j, double tol) {
  if (!j.is_object() || !j.contains("n") || !j.contains("components")) {
    throw InputError("curvature file needs \"n\" and \"components\"");
  }
  const int n = j.at("n").get<int>();
  if (n < 2 || n > kMaxDim) throw InputError("curvature dimension out of range");
  CurvTensor R(n);
  std::vector<char> assigned(R.data().size(), 0);
  auto slot = [n](int i, int j2, int k, int l) {
    return ((static_cast<std::size_t>(i) * n + j2) * n + k) * n + l;
  };
  for (const auto& c : j.at("components")) {
    const int i = c.at("i").get<int>() - 1;
    const int jj = c.at("j").get<int>() - 1;
    const int k = c.at("k").get<int>() - 1;
    const int l = c.at("l").get<int>() - 1;
    const double v = c.at("v").get<double>();
    for (int x : {i, jj, k, l}) {
      if (x < 0 || x >= n) throw InputError("curvature index out of range");
    }
    const struct {
      int a, b, c, d;
      double s;
    } images[] = {{i, jj, k, l, 1},  {jj, i, k, l, -1}, {i, jj, l, k, -1},
                  {jj, i, l, k, 1},  {k, l, i, jj, 1},  {l, k, i, jj, -1},
                  {k, l, jj, i, -1}, {l, k, jj, i, 1}};
    for (const auto& im : images) {
      const std::size_t s = slot(im.a, im.b, im.c, im.d);
      const double val = im.s * v;
      if (assigned[s] && std::abs(R.data()[s] - val) > tol) {
        throw InputError("inconsistent curvature components");
      }
      assigned[s] = 1;
      R.set_raw(im.a, im.b, im.c, im.d, val);
    }
  }
  if (R.bianchi_defect() > tol) {
    throw InputError("curvature components violate the first Bianchi identity");
  }
  return R;
}

CurvTensor load_curvature(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open curvature file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed curvature file: " + std::string(e.what()));
  }
  try {
    return curvature_from_json(j, tol);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed curvature file: " + std::string(e.what()));
  }
}

nlohmann::json curvature_to_json(const CurvTensor& R, double drop) {
  const int n = R.dim();
  nlohmann::json comps = nlohmann::json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          if (i * n + j > k * n + l) continue;
          const double v = R(i, j, k, l);
          if (std::abs(v) <= drop) continue;
          comps.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1},
                           {"l", l + 1}, {"v", v}});
        }
  return {{"n", n}, {"components", comps}};
}

}  // namespace pictk
