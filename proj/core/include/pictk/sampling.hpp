#pragma once

#include <cstdint>
#include <random>

#include "pictk/curvature.hpp"
#include "pictk/exterior.hpp"

namespace pictk {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double uniform(Rng& rng, double lo, double hi);
double gaussian(Rng& rng);

Vector random_vector(Rng& rng, int n);
Vector random_unit_vector(Rng& rng, int n);
// Complex Gaussian coefficients; all degrees when degree < 0.
FormElement random_form(Rng& rng, int n, int degree = -1);
FormElement random_real_form(Rng& rng, int n, int degree = -1);
SymBilinear random_symmetric(Rng& rng, int n);
// Symmetric with spectrum drawn uniformly from [lo, hi].
SymBilinear random_symmetric_spectrum(Rng& rng, int n, double lo, double hi);
Eigen::MatrixXd random_orthogonal(Rng& rng, int n);
Frame4 random_frame(Rng& rng, int n);

// Sum of KN squares of Gaussian symmetric matrices with random signs; spans the
// space of algebraic curvature tensors.
CurvTensor random_curvature(Rng& rng, int n, int terms = 6);
// Nonnegative combination of KN products of positive definite matrices.
CurvTensor random_positive_kn_curvature(Rng& rng, int n, int terms = 4);

}  // namespace pictk
