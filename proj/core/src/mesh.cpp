#include "dnc/mesh.hpp"

#include <algorithm>
#include <string>

#include "dnc/errors.hpp"

namespace dnc {

LogScaled LogScaled::from_log(double log_value) {
  if (log_value == -std::numeric_limits<double>::infinity()) {
    return {};
  }
  return {1.0, log_value};
}

double LogScaled::log_value() const {
  if (mantissa == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::log(mantissa) + log_scale;
}

double LogScaled::value() const {
  if (mantissa == 0.0) {
    return 0.0;
  }
  return mantissa * std::exp(log_scale);
}

bool LogScaled::is_finite() const {
  return std::isfinite(mantissa) && std::isfinite(log_scale);
}

LogScaled operator+(const LogScaled& lhs, const LogScaled& rhs) {
  if (lhs.is_zero()) return rhs;
  if (rhs.is_zero()) return lhs;
  const double top = std::max(lhs.log_scale, rhs.log_scale);
  if (!std::isfinite(top)) {
    return {1.0, top};
  }
  return {lhs.mantissa * std::exp(lhs.log_scale - top) +
              rhs.mantissa * std::exp(rhs.log_scale - top),
          top};
}

LogScaled operator*(const LogScaled& lhs, const LogScaled& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  return {lhs.mantissa * rhs.mantissa, lhs.log_scale + rhs.log_scale};
}

LogScaled operator*(const LogScaled& lhs, double factor) {
  if (factor == 0.0) return {};
  return {lhs.mantissa * factor, lhs.log_scale};
}

double ratio(const LogScaled& lhs, const LogScaled& rhs) {
  if (lhs.is_zero()) return 0.0;
  if (rhs.is_zero()) return std::numeric_limits<double>::infinity();
  return (lhs.mantissa / rhs.mantissa) * std::exp(lhs.log_scale - rhs.log_scale);
}

Field2D& Field2D::operator+=(const Field2D& other) {
  if (!same_shape(other)) throw InvalidArgument("Field2D shape mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Field2D& Field2D::operator-=(const Field2D& other) {
  if (!same_shape(other)) throw InvalidArgument("Field2D shape mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Field2D& Field2D::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

Field2D operator+(Field2D lhs, const Field2D& rhs) { return lhs += rhs; }
Field2D operator-(Field2D lhs, const Field2D& rhs) { return lhs -= rhs; }
Field2D operator*(double factor, Field2D field) { return field *= factor; }

double SpaceTimeGrid::max_spacing() const {
  double h = 0.0;
  for (int i = 0; i < nx; ++i) h = std::max(h, spacing(i));
  return h;
}

SpaceTimeGrid build_grid(int nx, int nt, double T, double gamma) {
  if (nx < 2) throw InvalidArgument("build_grid: nx must be >= 2, got " + std::to_string(nx));
  if (nt < 2) throw InvalidArgument("build_grid: nt must be >= 2, got " + std::to_string(nt));
  if (!(T > 0.0)) throw InvalidArgument("build_grid: T must be positive");
  if (!(gamma >= 1.0)) throw InvalidArgument("build_grid: grading exponent must be >= 1");

  SpaceTimeGrid grid;
  grid.nx = nx;
  grid.nt = nt;
  grid.T = T;
  grid.gamma = gamma;
  grid.dt = T / nt;

  grid.x.resize(nx + 1);
  for (int i = 0; i <= nx; ++i) {
    grid.x[i] = std::pow(static_cast<double>(i) / nx, gamma);
  }
  grid.x.front() = 0.0;
  grid.x.back() = 1.0;

  grid.t.resize(nt + 1);
  for (int j = 0; j <= nt; ++j) grid.t[j] = j * grid.dt;
  grid.t.back() = T;

  grid.node_weight.assign(nx + 1, 0.0);
  for (int i = 0; i < nx; ++i) {
    const double h = grid.spacing(i);
    grid.node_weight[i] += 0.5 * h;
    grid.node_weight[i + 1] += 0.5 * h;
  }
  return grid;
}

double integrate_space(std::span<const double> values, const SpaceTimeGrid& grid) {
  if (values.size() != static_cast<std::size_t>(grid.nodes())) {
    throw InvalidArgument("integrate_space: expected " + std::to_string(grid.nodes()) +
                          " values, got " + std::to_string(values.size()));
  }
  double sum = 0.0;
  for (int i = 0; i <= grid.nx; ++i) sum += grid.node_weight[i] * values[i];
  return sum;
}

std::vector<double> time_weights(const SpaceTimeGrid& grid, TimeRule rule) {
  const int nt = grid.nt;
  const double dt = grid.dt;
  std::vector<double> w(nt + 1, 0.0);
  switch (rule) {
    case TimeRule::implicit_euler:
      for (int j = 1; j <= nt; ++j) w[j] = dt;
      break;
    case TimeRule::interior_one_sided:
      if (nt == 2) {
        w[1] = 2.0 * dt;
        break;
      }
      for (int j = 1; j < nt; ++j) w[j] = dt;
      w[1] += 0.5 * dt;
      w[nt - 1] += 0.5 * dt;
      break;
  }
  return w;
}

namespace {

void check_shapes(const Field2D& f, const SpaceTimeGrid& grid, const char* what) {
  if (f.rows() != grid.times() || f.cols() != grid.nodes()) {
    throw InvalidArgument(std::string(what) + ": field shape does not match the grid");
  }
}

}  // namespace

LogScaled integrate_spacetime_logweight(const Field2D& logw, const Field2D& values,
                                        const SpaceTimeGrid& grid, TimeRule rule) {
  check_shapes(logw, grid, "integrate_spacetime_logweight");
  check_shapes(values, grid, "integrate_spacetime_logweight");
  const auto tw = time_weights(grid, rule);

  double top = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= grid.nt; ++j) {
    if (tw[j] == 0.0) continue;
    for (int i = 0; i <= grid.nx; ++i) {
      const double v = values(j, i);
      const double lw = logw(j, i);
      if (std::isnan(v) || std::isnan(lw)) {
        throw InvalidArgument("integrate_spacetime_logweight: NaN in inputs");
      }
      if (v < 0.0) {
        throw InvalidArgument("integrate_spacetime_logweight: values must be nonnegative");
      }
      if (v == 0.0 || grid.node_weight[i] == 0.0) continue;
      top = std::max(top, lw);
    }
  }
  if (top == -std::numeric_limits<double>::infinity()) return {};
  if (top == std::numeric_limits<double>::infinity()) return {1.0, top};

  double sum = 0.0;
  for (int j = 0; j <= grid.nt; ++j) {
    if (tw[j] == 0.0) continue;
    double row = 0.0;
    for (int i = 0; i <= grid.nx; ++i) {
      const double v = values(j, i);
      if (v == 0.0) continue;
      row += grid.node_weight[i] * v * std::exp(logw(j, i) - top);
    }
    sum += tw[j] * row;
  }
  if (sum == 0.0) return {};
  return {sum, top};
}

double integrate_spacetime(const Field2D& values, const SpaceTimeGrid& grid, TimeRule rule) {
  check_shapes(values, grid, "integrate_spacetime");
  const auto tw = time_weights(grid, rule);
  double sum = 0.0;
  for (int j = 0; j <= grid.nt; ++j) {
    if (tw[j] == 0.0) continue;
    sum += tw[j] * integrate_space(values.row(j), grid);
  }
  return sum;
}

}  // namespace dnc
