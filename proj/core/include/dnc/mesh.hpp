#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace dnc {

/// A positive quantity stored as mantissa * exp(log_scale).
///
/// Carleman-weighted integrals routinely exceed the double range, so every
/// weighted quantity travels in this factored form. A zero value has
/// mantissa 0 and log_scale 0.
struct LogScaled {
  double mantissa = 0.0;
  double log_scale = 0.0;

  static LogScaled from_log(double log_value);

  /// log(mantissa) + log_scale; -inf for zero.
  double log_value() const;
  /// exp(log_value()); may overflow to inf or underflow to 0.
  double value() const;
  bool is_zero() const { return mantissa == 0.0; }
  bool is_finite() const;
};

LogScaled operator+(const LogScaled& lhs, const LogScaled& rhs);
LogScaled operator*(const LogScaled& lhs, const LogScaled& rhs);
LogScaled operator*(const LogScaled& lhs, double factor);

/// lhs / rhs as a plain double (0 if lhs is zero, inf if rhs is zero).
double ratio(const LogScaled& lhs, const LogScaled& rhs);

/// Dense (nt+1) x (nx+1) table of space-time values, row j = time t_j.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int j, int i) { return data_[index(j, i)]; }
  double operator()(int j, int i) const { return data_[index(j, i)]; }

  std::span<double> row(int j) {
    return {data_.data() + index(j, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const double> row(int j) const {
    return {data_.data() + index(j, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Field2D& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Field2D& operator+=(const Field2D& other);
  Field2D& operator-=(const Field2D& other);
  Field2D& operator*=(double factor);

 private:
  std::size_t index(int j, int i) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(i);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Field2D operator+(Field2D lhs, const Field2D& rhs);
Field2D operator-(Field2D lhs, const Field2D& rhs);
Field2D operator*(double factor, Field2D field);

/// Graded spatial mesh on [0,1] and uniform time grid on [0,T].
struct SpaceTimeGrid {
  int nx = 0;
  int nt = 0;
  double T = 0.0;
  double gamma = 1.0;
  double dt = 0.0;
  std::vector<double> x;
  std::vector<double> t;
  /// Trapezoid weight of each node: (x_{i+1} - x_{i-1}) / 2, halved at the ends.
  std::vector<double> node_weight;

  int nodes() const { return nx + 1; }
  int times() const { return nt + 1; }
  double spacing(int cell) const { return x[cell + 1] - x[cell]; }
  double midpoint(int cell) const { return 0.5 * (x[cell] + x[cell + 1]); }
  double max_spacing() const;
  Field2D make_field(double fill = 0.0) const { return Field2D(times(), nodes(), fill); }
};

/// Nodes x_i = (i/nx)^gamma, times t_j = j T / nt.
SpaceTimeGrid build_grid(int nx, int nt, double T, double gamma = 2.0);

/// Trapezoid rule on the (possibly nonuniform) spatial mesh.
double integrate_space(std::span<const double> values, const SpaceTimeGrid& grid);

/// How rows of a space-time field are weighted in time.
enum class TimeRule {
  /// Rows 0 and nt dropped; the two boundary cells use the value of the
  /// adjacent interior row, the rest is the trapezoid rule. Weights sum to T.
  interior_one_sided,
  /// Rows 1..nt with weight dt each, the quadrature paired with implicit Euler.
  implicit_euler,
};

/// Per-row time weights of the given rule (length nt+1).
std::vector<double> time_weights(const SpaceTimeGrid& grid, TimeRule rule);

/// Integral of exp(logw) * values over (0,T)x(0,1), returned in factored form.
///
/// All exponents are shifted by the maximum of logw over the contributing
/// entries before summation, so |logw| up to ~1e300 neither overflows nor
/// underflows. Entries whose values are zero are skipped, which admits
/// logw = +inf at points where the integrand is known to vanish.
LogScaled integrate_spacetime_logweight(const Field2D& logw, const Field2D& values,
                                        const SpaceTimeGrid& grid,
                                        TimeRule rule = TimeRule::interior_one_sided);

/// Plain space-time integral of values with the given time rule.
double integrate_spacetime(const Field2D& values, const SpaceTimeGrid& grid,
                           TimeRule rule = TimeRule::implicit_euler);

}  // namespace dnc
