#pragma once

#include "seaway/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <span>

namespace seaway {

//! Multivariate standard normal density.
template <typename Derived>
typename Derived::Scalar gaussian_kernel(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  const Scalar p = static_cast<Scalar>(z.size());
  return std::pow(Scalar(2) * std::numbers::pi_v<Scalar>, -p / Scalar(2)) * std::exp(-z.squaredNorm() / Scalar(2));
}

//! Direct kernel sum with H = h^2 I: (1 / (n h^p)) sum K((x - X_i) / h).
template <typename Scalar, int P>
Scalar kde_naive(const Eigen::Matrix<Scalar, P, 1>& x, std::span<const Eigen::Matrix<Scalar, P, 1>> data, Scalar h) {
  if (data.empty()) throw InvalidInput("kde needs at least one sample");
  if (!(h > 0)) throw InvalidInput("bandwidth must be positive");
  Scalar sum = 0;
  for (const auto& xi : data) sum += gaussian_kernel(((x - xi) / h).eval());
  return sum / (static_cast<Scalar>(data.size()) * std::pow(h, static_cast<Scalar>(x.size())));
}

struct Bandwidth {
  double h = 0.0;  // meters
  static constexpr int p = 2;

  //! |H|^(-1/2) for H = h^2 I.
  double scale() const { return 1.0 / std::pow(h, p); }
  void validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("bandwidth h must be positive");
  }
};

//! Regular grid of cell centers; cell (i, j) is `origin + (i, j) * cell` in
//! (east, north).
struct GridSpec {
  LocalPoint origin{0.0, 0.0};
  double cell = 0.0;
  int nx = 0;
  int ny = 0;

  LocalPoint center(int i, int j) const { return origin + LocalPoint(i * cell, j * cell); }
  void validate() const;
};

//! Grid covering `data` with a margin of at least 4h, cell h/5 unless given,
//! enlarged as needed to stay within 4096 cells per side.
GridSpec default_grid(std::span<const LocalPoint> data, const Bandwidth& bw, double cell = 0.0);

struct KdeModel {
  GridSpec grid;
  Eigen::MatrixXd values;  // ny x nx, column-major, so memory runs north-fastest
  double max_value = 0.0;
  Bandwidth bw;
  std::size_t n = 0;
  GeoPoint frame;  // geodetic origin of the local frame the grid lives in

  double at(int i, int j) const { return values(j, i); }
  //! Sum of values times cell area; the grid-captured probability mass.
  double mass() const { return values.sum() * grid.cell * grid.cell; }
};

//! Grid estimate of the density via FFT convolution. Throws InvalidInput if
//! any sample lies closer than 4h to the grid edge.
KdeModel kde_fft(std::span<const LocalPoint> data, const Bandwidth& bw, const GridSpec& grid);

//! Bilinear density at p divided by max_value, clamped to [0, 1]. Points
//! outside the span of cell centers give 0.
double lookup_normalized(const KdeModel& model, const LocalPoint& p);

//! Normalized density lookup for positions expressed in another local frame.
class DensityField {
 public:
  DensityField() = default;
  DensityField(const KdeModel* model, const GeoPoint& frame);

  double operator()(const LocalPoint& p) const;
  const KdeModel* model() const { return model_; }

 private:
  const KdeModel* model_ = nullptr;
  GeoPoint frame_;
  bool same_frame_ = true;
};

}  // namespace seaway
