#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gridlift/features.hpp"
#include "gridlift/mesh.hpp"

namespace gridlift {

inline constexpr double kDefaultCurvatureEpsilon = 1e-8;

struct Gradient {
  double di = 0.0;
  double dj = 0.0;
  double norm2() const noexcept { return di * di + dj * dj; }
};

/// Symmetric 2x2 Hessian; the mixed term is stored once.
struct Hessian {
  double ii = 0.0;
  double ij = 0.0;
  double jj = 0.0;
  double det() const noexcept { return ii * jj - ij * ij; }
};

class DifferentialField {
 public:
  DifferentialField(LatticeShape shape, std::vector<Gradient> grad, std::vector<Hessian> hess);

  LatticeShape shape() const noexcept { return shape_; }
  const Gradient& grad(LatticeIndex p) const { return grad_[shape_.flatten(p)]; }
  const Hessian& hess(LatticeIndex p) const { return hess_[shape_.flatten(p)]; }
  const std::vector<Gradient>& grads() const noexcept { return grad_; }
  const std::vector<Hessian>& hessians() const noexcept { return hess_; }

 private:
  LatticeShape shape_;
  std::vector<Gradient> grad_;
  std::vector<Hessian> hess_;
};

/// Which Gaussian-curvature expression to evaluate from (grad, Hessian).
enum class CurvatureFormula {
  /// det(H) / (|grad|^2 + eps), magnitude clamped at 1 / eps.
  GradientNormalized,
  /// det(H) / (1 + |grad|^2)^2, the curvature of the graph surface z = I(i, j).
  GraphSurface,
};

struct CurvatureOptions {
  double epsilon = kDefaultCurvatureEpsilon;
  CurvatureFormula formula = CurvatureFormula::GradientNormalized;
};

class CurvatureField {
 public:
  CurvatureField(LatticeShape shape, std::vector<double> kappa, double epsilon,
                 std::size_t saturated = 0);

  LatticeShape shape() const noexcept { return shape_; }
  double epsilon() const noexcept { return epsilon_; }
  const std::vector<double>& kappa() const noexcept { return kappa_; }
  double at(LatticeIndex p) const { return kappa_[shape_.flatten(p)]; }
  /// Number of points whose |kappa| hit the 1 / epsilon guard.
  std::size_t saturated() const noexcept { return saturated_; }

 private:
  LatticeShape shape_;
  std::vector<double> kappa_;
  double epsilon_;
  std::size_t saturated_;
};

/// Second-order central differences with replicate padding:
///   dI/di   = (I[i+1][j] - I[i-1][j]) / 2h
///   I_ii    = (I[i+1][j] - 2 I[i][j] + I[i-1][j]) / h^2
///   I_ij    = (I[i+1][j+1] - I[i+1][j-1] - I[i-1][j+1] + I[i-1][j-1]) / 4h^2
/// `spacing` is the lattice step h in the units derivatives are taken in.
DifferentialField differential_fields(const FeatureField& field, std::size_t channel = 0,
                                      double spacing = 1.0);

/// Pointwise curvature under the chosen formula. Returns the value and
/// whether it was clamped.
std::pair<double, bool> curvature_value(const Gradient& grad, const Hessian& hess,
                                        const CurvatureOptions& options = {});

/// Throws InvalidArgument if epsilon is not positive.
CurvatureField gaussian_curvature(const DifferentialField& field,
                                  double epsilon = kDefaultCurvatureEpsilon,
                                  CurvatureFormula formula = CurvatureFormula::GradientNormalized);

/// Local model S(x, y) = s0 + x sx + y sy + x^2 sxx + 2 x y sxy + y^2 syy in
/// mesh (x, y) offsets from a lattice point.
struct QuadraticPatch {
  double s0 = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;

  double evaluate(double dx, double dy) const noexcept {
    return s0 + dx * sx + dy * sy + dx * dx * sxx + 2.0 * dx * dy * sxy + dy * dy * syy;
  }
  /// First derivatives in lattice (i, j) order: i runs against y.
  Gradient gradient() const noexcept { return {-sy, sx}; }
  /// True second derivatives of the model, in lattice (i, j) order.
  Hessian hessian() const noexcept { return {2.0 * syy, -2.0 * sxy, 2.0 * sxx}; }
};

struct QuadraticFitResult {
  QuadraticPatch patch;
  double kappa = 0.0;
};

/// Least-squares quadratic through the lattice point's own value, fitted to
/// the (2 radius + 1)^2 window clipped at the borders, for one feature
/// channel. kappa comes from the model's gradient and Hessian.
///
/// Throws DegenerateNeighborhood if the clipped window holds fewer than six
/// points or does not determine the five derivative terms.
QuadraticFitResult quadratic_fit_curvature(const SparseCloud& cloud, LatticeIndex at,
                                           int radius, std::size_t channel = 0,
                                           const CurvatureOptions& options = {});

/// Curvature of the cloud's feature graph(s) in mesh units. Single-feature
/// clouds keep the signed value; multi-feature clouds average |kappa| over
/// channels.
CurvatureField surface_curvature(const SparseCloud& cloud, const CurvatureOptions& options = {});

}  // namespace gridlift
