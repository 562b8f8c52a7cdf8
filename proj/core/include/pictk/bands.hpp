#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pictk/curvature.hpp"
#include "pictk/report.hpp"

namespace pictk {

// Warping function phi with closed-form derivatives.
class Warping {
 public:
  enum class Kind { Const, Sin, Linear, Table };

  static Warping constant(double value);
  // amplitude * sin(freq * r + phase)
  static Warping sine(double amplitude = 1.0, double freq = 1.0,
                      double phase = 0.0);
  // slope * r + intercept
  static Warping linear(double slope = 1.0, double intercept = 0.0);
  // Natural cubic spline through (r_i, phi_i).
  static Warping table(std::vector<double> r, std::vector<double> phi);
  static Warping from_json(const nlohmann::json& j);

  Kind kind() const { return kind_; }
  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  // -phi''/phi, evaluated in closed form where phi may vanish.
  double radial_curvature(double r) const;
  nlohmann::json to_json() const;

 private:
  Kind kind_ = Kind::Const;
  double p0_ = 1.0, p1_ = 0.0, p2_ = 0.0;
  std::vector<double> r_, y_, m_;  // spline knots and second derivatives
  std::size_t span(double r) const;
};

// Warped product [r0, r1] x S^{n-1} with metric dr^2 + phi(r)^2 g_sphere.
// Fiber indices are 0..n-2, the radial index is n-1.
struct WarpedBand {
  int n = 4;
  double r0 = 0.0;
  double r1 = 1.0;
  Warping phi = Warping::constant(1.0);

  void validate() const;
  static WarpedBand from_json(const nlohmann::json& j);
  static WarpedBand load(const std::string& path);
};

enum class BandEnd { Lower, Upper };

CurvTensor band_curvature_at(const WarpedBand& B, double r);
Report sigma_pic_profile(const WarpedBand& B, double sigma, int samples,
                         const SearchConfig& cfg = {});
SymBilinear boundary_shape(const WarpedBand& B, BandEnd end);
// max(0, -(sum of the k smallest eigenvalues of A)).
double k_convexity_defect(const SymBilinear& A, int k);
double width(const WarpedBand& B);

struct FocalRadius {
  double radius = 0.0;     // min(first crossing, width)
  bool crossed = false;    // a crossing was found within the search horizon
  double crossing = 0.0;   // location of that crossing
};
FocalRadius focal_radius_model(const WarpedBand& B, BandEnd end);

struct CounterexampleSpec {
  int n = 4;
  int k = 2;
  double sigma = 1.0;
  double L = 3.0;
  void validate() const;
};

Report counterexample_report(const CounterexampleSpec& S,
                             const SearchConfig& cfg = {});

}  // namespace pictk
