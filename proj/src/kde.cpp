#include "seaway/kde.hpp"

#include "seaway/geometry.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <complex>
#include <sstream>

namespace seaway {

namespace {

constexpr double kMarginBandwidths = 4.0;
constexpr int kMaxCells = 4096;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Sampled 1-D Gaussian of standard deviation `sigma` at offsets d * cell,
// |d| <= radius, laid out circularly in a length-L buffer and transformed.
std::vector<std::complex<double>> kernel_spectrum(Eigen::FFT<double>& fft, double sigma, double cell, int radius, int L) {
  std::vector<double> k(L, 0.0);
  const double norm = cell / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  for (int d = -radius; d <= radius; ++d) {
    const double x = d * cell;
    k[(d + L) % L] += norm * std::exp(-0.5 * x * x / (sigma * sigma));
  }
  std::vector<std::complex<double>> out;
  fft.fwd(out, k);
  return out;
}

// Circular convolution of `line` (length L) with a kernel given by its spectrum.
void convolve(Eigen::FFT<double>& fft, std::vector<double>& line, const std::vector<std::complex<double>>& kernel,
              std::vector<std::complex<double>>& scratch) {
  fft.fwd(scratch, line);
  for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] *= kernel[i];
  fft.inv(line, scratch);
}

}  // namespace

void GridSpec::validate() const {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw InvalidInput("grid cell must be positive");
  if (nx < 1 || ny < 1) throw InvalidInput("grid must have at least one cell per axis");
  if (!origin.allFinite()) throw InvalidInput("grid origin must be finite");
}

GridSpec default_grid(std::span<const LocalPoint> data, const Bandwidth& bw, double cell) {
  bw.validate();
  if (data.empty()) throw InvalidInput("kde needs at least one sample");
  if (cell <= 0.0) cell = bw.h / 5.0;
  Box box;
  for (const auto& p : data) box.extend(p);
  const LocalPoint size = box.size();
  // One extra cell beyond the required margin absorbs rounding.
  auto layout = [&](double c) {
    const double margin = kMarginBandwidths * bw.h + c;
    GridSpec g;
    g.cell = c;
    g.origin = box.min - LocalPoint::Constant(margin);
    g.nx = static_cast<int>(std::ceil((size.x() + 2 * margin) / c)) + 1;
    g.ny = static_cast<int>(std::ceil((size.y() + 2 * margin) / c)) + 1;
    return g;
  };
  GridSpec g = layout(cell);
  while (std::max(g.nx, g.ny) > kMaxCells) {
    cell *= static_cast<double>(std::max(g.nx, g.ny)) / (kMaxCells - 1);
    g = layout(cell);
  }
  return g;
}

KdeModel kde_fft(std::span<const LocalPoint> data, const Bandwidth& bw, const GridSpec& grid) {
  bw.validate();
  grid.validate();
  if (data.empty()) throw InvalidInput("kde needs at least one sample");

  const double h = bw.h;
  const double margin = kMarginBandwidths * h * (1.0 - 1e-12);
  const LocalPoint lo = grid.origin;
  const LocalPoint hi = grid.center(grid.nx - 1, grid.ny - 1);
  std::vector<std::size_t> offenders;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const LocalPoint& p = data[k];
    if (!p.allFinite() || p.x() - lo.x() < margin || hi.x() - p.x() < margin || p.y() - lo.y() < margin ||
        hi.y() - p.y() < margin)
      offenders.push_back(k);
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg << offenders.size() << " sample(s) closer than 4h to the grid edge, indices:";
    for (std::size_t k = 0; k < std::min<std::size_t>(offenders.size(), 20); ++k) msg << ' ' << offenders[k];
    if (offenders.size() > 20) msg << " ...";
    throw InvalidInput(msg.str());
  }

  // Cells coarser than 0.4h are refined internally and subsampled afterwards.
  const int refine = std::max(1, static_cast<int>(std::ceil(grid.cell / (0.4 * h) - 1e-9)));
  GridSpec fine = grid;
  fine.cell = grid.cell / refine;
  fine.nx = (grid.nx - 1) * refine + 1;
  fine.ny = (grid.ny - 1) * refine + 1;
  const double c = fine.cell;

  // Each sample is spread with a narrow Gaussian of width s, then the grid is
  // convolved with a Gaussian of width t; s^2 + t^2 = h^2 reproduces the kernel.
  const double s = std::min(h / std::sqrt(2.0), 1.2 * c);
  const double t = std::sqrt(h * h - s * s);
  const int spread = static_cast<int>(std::ceil(8.0 * s / c)) + 1;
  const int pad = spread + 1;
  const int mx = fine.nx + 2 * pad;
  const int my = fine.ny + 2 * pad;
  const int radius = std::min(static_cast<int>(std::ceil(9.0 * t / c)), std::max(mx, my));
  const int lx = next_pow2(mx + radius);
  const int ly = next_pow2(my + radius);

  // Padded spread grid, ly x lx, column-major (north-fastest).
  Eigen::MatrixXd field = Eigen::MatrixXd::Zero(ly, lx);
  const double gnorm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s);
  std::vector<double> wx(2 * spread + 1), wy(2 * spread + 1);
  const LocalPoint base = fine.origin - LocalPoint::Constant(pad * c);
  for (const LocalPoint& p : data) {
    const LocalPoint f = (p - base) / c;
    const int ix = static_cast<int>(std::lround(f.x()));
    const int iy = static_cast<int>(std::lround(f.y()));
    for (int d = -spread; d <= spread; ++d) {
      const double dx = (ix + d - f.x()) * c;
      const double dy = (iy + d - f.y()) * c;
      wx[d + spread] = gnorm * std::exp(-0.5 * dx * dx / (s * s));
      wy[d + spread] = gnorm * std::exp(-0.5 * dy * dy / (s * s));
    }
    const Eigen::Map<const Eigen::VectorXd> vy(wy.data(), static_cast<Eigen::Index>(wy.size()));
    for (int d = -spread; d <= spread; ++d)
      field.col(ix + d).segment(iy - spread, 2 * spread + 1) += wx[d + spread] * vy;
  }

  Eigen::FFT<double> fft;
  const auto ky = kernel_spectrum(fft, t, c, radius, ly);
  const auto kx = kernel_spectrum(fft, t, c, radius, lx);
  std::vector<double> line;
  std::vector<std::complex<double>> scratch;

  // North pass over every occupied column, keeping only the output rows.
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(grid.ny, lx);
  for (int i = 0; i < mx; ++i) {
    line.assign(field.col(i).data(), field.col(i).data() + ly);
    convolve(fft, line, ky, scratch);
    for (int j = 0; j < grid.ny; ++j) partial(j, i) = line[pad + j * refine];
  }
  // East pass.
  KdeModel model;
  model.grid = grid;
  model.bw = bw;
  model.n = data.size();
  model.values.resize(grid.ny, grid.nx);
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (int j = 0; j < grid.ny; ++j) {
    line.resize(lx);
    for (int i = 0; i < lx; ++i) line[i] = partial(j, i);
    convolve(fft, line, kx, scratch);
    for (int i = 0; i < grid.nx; ++i) model.values(j, i) = std::max(0.0, line[pad + i * refine] * inv_n);
  }
  model.max_value = model.values.maxCoeff();
  if (!(model.max_value > 0.0)) throw InvalidInput("kde grid holds no density");
  return model;
}

double lookup_normalized(const KdeModel& model, const LocalPoint& p) {
  const GridSpec& g = model.grid;
  const double fx = (p.x() - g.origin.x()) / g.cell;
  const double fy = (p.y() - g.origin.y()) / g.cell;
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= g.nx - 1 && fy <= g.ny - 1)) return 0.0;
  const int i = std::min(static_cast<int>(fx), std::max(g.nx - 2, 0));
  const int j = std::min(static_cast<int>(fy), std::max(g.ny - 2, 0));
  const double u = fx - i, v = fy - j;
  const int i1 = std::min(i + 1, g.nx - 1), j1 = std::min(j + 1, g.ny - 1);
  const double value = (1 - u) * (1 - v) * model.at(i, j) + u * (1 - v) * model.at(i1, j) +
                       (1 - u) * v * model.at(i, j1) + u * v * model.at(i1, j1);
  return std::clamp(value / model.max_value, 0.0, 1.0);
}

DensityField::DensityField(const KdeModel* model, const GeoPoint& frame)
    : model_(model), frame_(frame), same_frame_(model && model->frame.lat == frame.lat && model->frame.lon == frame.lon) {}

double DensityField::operator()(const LocalPoint& p) const {
  if (!model_) return 0.0;
  if (same_frame_) return lookup_normalized(*model_, p);
  const GeoPoint g = unproject(p, frame_);
  if (std::abs(g.lat - model_->frame.lat) >= 1.0) return 0.0;
  return lookup_normalized(*model_, project(g, model_->frame));
}

}  // namespace seaway
