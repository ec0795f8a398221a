#include "gridlift/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "gridlift/error.hpp"

namespace gridlift {

DifferentialField::DifferentialField(LatticeShape shape, std::vector<Gradient> grad,
                                     std::vector<Hessian> hess)
    : shape_(shape), grad_(std::move(grad)), hess_(std::move(hess)) {
  if (grad_.size() != shape_.size() || hess_.size() != shape_.size()) {
    throw Error(ErrorCode::InvalidArgument, "differential field size mismatch");
  }
}

CurvatureField::CurvatureField(LatticeShape shape, std::vector<double> kappa, double epsilon,
                               std::size_t saturated)
    : shape_(shape), kappa_(std::move(kappa)), epsilon_(epsilon), saturated_(saturated) {
  if (kappa_.size() != shape_.size()) {
    throw Error(ErrorCode::InvalidArgument, "curvature field size mismatch");
  }
}

DifferentialField differential_fields(const FeatureField& field, std::size_t channel,
                                      double spacing) {
  if (channel >= field.depth()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature channel out of range");
  }
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");

  const LatticeShape shape{field.rows(), field.cols()};
  const auto rows = static_cast<std::ptrdiff_t>(shape.rows);
  const auto cols = static_cast<std::ptrdiff_t>(shape.cols);
  // Replicate padding.
  const auto z = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    i = std::clamp<std::ptrdiff_t>(i, 0, rows - 1);
    j = std::clamp<std::ptrdiff_t>(j, 0, cols - 1);
    return field.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j), channel);
  };

  const double h = spacing;
  const double h2 = spacing * spacing;
  std::vector<Gradient> grad(shape.size());
  std::vector<Hessian> hess(shape.size());
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::ptrdiff_t j = 0; j < cols; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * cols + j);
      const double c = z(i, j);
      grad[k].di = (z(i + 1, j) - z(i - 1, j)) / (2.0 * h);
      grad[k].dj = (z(i, j + 1) - z(i, j - 1)) / (2.0 * h);
      hess[k].ii = (z(i + 1, j) - 2.0 * c + z(i - 1, j)) / h2;
      hess[k].jj = (z(i, j + 1) - 2.0 * c + z(i, j - 1)) / h2;
      hess[k].ij =
          (z(i + 1, j + 1) - z(i + 1, j - 1) - z(i - 1, j + 1) + z(i - 1, j - 1)) / (4.0 * h2);
    }
  }
  return DifferentialField(shape, std::move(grad), std::move(hess));
}

std::pair<double, bool> curvature_value(const Gradient& grad, const Hessian& hess,
                                        const CurvatureOptions& options) {
  const double det = hess.det();
  if (options.formula == CurvatureFormula::GraphSurface) {
    const double w = 1.0 + grad.norm2();
    return {det / (w * w), false};
  }
  const double bound = 1.0 / options.epsilon;
  const double kappa = det / (grad.norm2() + options.epsilon);
  if (std::abs(kappa) >= bound) return {std::copysign(bound, kappa), true};
  return {kappa, false};
}

CurvatureField gaussian_curvature(const DifferentialField& field, double epsilon,
                                  CurvatureFormula formula) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const CurvatureOptions options{epsilon, formula};
  std::vector<double> kappa(field.shape().size());
  std::size_t saturated = 0;
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    const auto [value, clamped] =
        curvature_value(field.grads()[k], field.hessians()[k], options);
    kappa[k] = value;
    saturated += clamped ? 1 : 0;
  }
  return CurvatureField(field.shape(), std::move(kappa), epsilon, saturated);
}

QuadraticFitResult quadratic_fit_curvature(const SparseCloud& cloud, LatticeIndex at, int radius,
                                           std::size_t channel, const CurvatureOptions& options) {
  const LatticeShape shape = cloud.shape();
  if (!shape.contains(at)) throw Error(ErrorCode::IndexOutOfRange, "fit center outside grid");
  if (channel >= cloud.feature_depth()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature channel out of range");
  }
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "fit radius must be >= 1");

  const auto r = static_cast<std::size_t>(radius);
  const std::size_t i0 = at.row > r ? at.row - r : 0;
  const std::size_t i1 = std::min(at.row + r, shape.rows - 1);
  const std::size_t j0 = at.col > r ? at.col - r : 0;
  const std::size_t j1 = std::min(at.col + r, shape.cols - 1);
  const std::size_t points = (i1 - i0 + 1) * (j1 - j0 + 1);
  if (points < 6) {
    throw Error(ErrorCode::DegenerateNeighborhood,
                "window holds " + std::to_string(points) + " points, need 6");
  }

  // The center value is pinned; the remaining points determine the five
  // derivative terms.
  const double center = cloud.feature(at, channel);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(points - 1), 5);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(points - 1));
  Eigen::Index row = 0;
  for (std::size_t i = i0; i <= i1; ++i) {
    for (std::size_t j = j0; j <= j1; ++j) {
      if (i == at.row && j == at.col) continue;
      const double dx = static_cast<double>(j) - static_cast<double>(at.col);
      const double dy = static_cast<double>(at.row) - static_cast<double>(i);
      design.row(row) << dx, dy, dx * dx, 2.0 * dx * dy, dy * dy;
      rhs(row) = cloud.feature({i, j}, channel) - center;
      ++row;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 5) {
    throw Error(ErrorCode::DegenerateNeighborhood, "window does not determine a quadratic");
  }
  const Eigen::VectorXd coef = qr.solve(rhs);

  QuadraticFitResult result;
  result.patch = {center, coef(0), coef(1), coef(2), coef(3), coef(4)};
  result.kappa = curvature_value(result.patch.gradient(), result.patch.hessian(), options).first;
  return result;
}

CurvatureField surface_curvature(const SparseCloud& cloud, const CurvatureOptions& options) {
  const LatticeShape shape = cloud.shape();
  const std::size_t depth = cloud.feature_depth();
  std::vector<double> kappa(shape.size(), 0.0);
  std::size_t saturated = 0;

  for (std::size_t c = 0; c < depth; ++c) {
    FeatureField channel(shape.rows, shape.cols, 1);
    for (std::size_t i = 0; i < shape.rows; ++i) {
      for (std::size_t j = 0; j < shape.cols; ++j) channel.at(i, j) = cloud.feature({i, j}, c);
    }
    const CurvatureField field =
        gaussian_curvature(differential_fields(channel), options.epsilon, options.formula);
    saturated += field.saturated();
    for (std::size_t k = 0; k < kappa.size(); ++k) {
      kappa[k] += depth == 1 ? field.kappa()[k] : std::abs(field.kappa()[k]);
    }
  }
  if (depth > 1) {
    for (double& v : kappa) v /= static_cast<double>(depth);
  }
  return CurvatureField(shape, std::move(kappa), options.epsilon, saturated);
}

}  // namespace gridlift
