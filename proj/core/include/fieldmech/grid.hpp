#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldmech {

/// Thrown on contract violations (bad grids, out-of-region positions,
/// non-finite data) and solver failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Cells an evaluation point (or a deposit kernel) must keep between itself
/// and the grid boundary. Segment quadrature and per-cell line integrals are
/// only evaluated inside this region.
inline constexpr int kSafeMargin = 2;
/// Field integrals (Lagrangian / Hamiltonian densities) sum over cells at
/// least this far from the boundary, where central stencils apply.
inline constexpr int kIntegralMargin = 1;
/// Verification norms and claim measurements use this margin so one-sided
/// boundary stencils never enter a reported number.
inline constexpr int kVerifyMargin = 2;

/// Uniform cell-centered grid, origin at the central cell. Dims must be odd
/// so that x = 0 is an actual cell center.
class Grid {
public:
  Grid() = default;
  Grid(int nx, int ny, int nz, double spacing);

  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  int dim(int axis) const { return n_[axis]; }
  double spacing() const { return h_; }
  double cell_volume() const { return h_ * h_ * h_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * n_[1] + j) * n_[0] + i;
  }

  Vec3 center(int i, int j, int k) const {
    return {(i - (n_[0] - 1) / 2) * h_, (j - (n_[1] - 1) / 2) * h_,
            (k - (n_[2] - 1) / 2) * h_};
  }

  /// Continuous index coordinate of a position along one axis (cell centers
  /// sit at integer values).
  double frac_index(double pos, int axis) const {
    return pos / h_ + (n_[axis] - 1) / 2;
  }

  bool interior(int i, int j, int k, int margin) const {
    return i >= margin && i < n_[0] - margin && j >= margin &&
           j < n_[1] - margin && k >= margin && k < n_[2] - margin;
  }

  /// True when the two-cell deposit kernel around x stays at least
  /// kSafeMargin cells away from the boundary on every axis.
  bool in_safe_region(const Vec3& x) const {
    for (int a = 0; a < 3; ++a) {
      double u = frac_index(x[a], a);
      if (!(u >= kSafeMargin && u <= n_[a] - 1 - kSafeMargin - 1)) return false;
    }
    return true;
  }

  /// The region is a box, so a segment is inside iff its endpoints are.
  bool segment_in_safe_region(const Vec3& end) const {
    return in_safe_region({0, 0, 0}) && in_safe_region(end);
  }

  bool operator==(const Grid& o) const {
    return n_ == o.n_ && h_ == o.h_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  std::array<int, 3> n_{5, 5, 5};
  double h_ = 1.0;
};

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid_(g), v_(g.cell_count(), fill) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }

  double& operator()(int i, int j, int k) { return v_[grid_.index(i, j, k)]; }
  double operator()(int i, int j, int k) const {
    return v_[grid_.index(i, j, k)];
  }
  double& operator[](std::size_t c) { return v_[c]; }
  double operator[](std::size_t c) const { return v_[c]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  bool all_finite() const;
  void fill(double v) { std::fill(v_.begin(), v_.end(), v); }

private:
  Grid grid_;
  std::vector<double> v_;
};

/// Three collocated components, stored component-major: comp*cells + cell.
class VectorField {
public:
  VectorField() = default;
  explicit VectorField(const Grid& g, double fill = 0.0)
      : grid_(g), v_(3 * g.cell_count(), fill) {}

  const Grid& grid() const { return grid_; }
  std::size_t cells() const { return grid_.cell_count(); }
  std::size_t size() const { return v_.size(); }

  double& at(int comp, int i, int j, int k) {
    return v_[comp * cells() + grid_.index(i, j, k)];
  }
  double at(int comp, int i, int j, int k) const {
    return v_[comp * cells() + grid_.index(i, j, k)];
  }
  double& at(int comp, std::size_t cell) { return v_[comp * cells() + cell]; }
  double at(int comp, std::size_t cell) const {
    return v_[comp * cells() + cell];
  }

  Vec3 vec(int i, int j, int k) const {
    std::size_t c = grid_.index(i, j, k);
    return {v_[c], v_[cells() + c], v_[2 * cells() + c]};
  }
  Vec3 vec(std::size_t c) const {
    return {v_[c], v_[cells() + c], v_[2 * cells() + c]};
  }
  void set(int i, int j, int k, const Vec3& w) {
    std::size_t c = grid_.index(i, j, k);
    v_[c] = w.x;
    v_[cells() + c] = w.y;
    v_[2 * cells() + c] = w.z;
  }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  bool all_finite() const;
  void fill(double v) { std::fill(v_.begin(), v_.end(), v); }

private:
  Grid grid_;
  std::vector<double> v_;
};

// Arithmetic on whole fields. Grids must match.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

// Interior norms and inner products. Inner products carry the h^3 cell
// volume; max norms do not.
double interior_max_abs(const ScalarField& f, int margin);
double interior_max_abs(const VectorField& f, int margin);
double interior_inner(const ScalarField& a, const ScalarField& b, int margin);
double interior_inner(const VectorField& a, const VectorField& b, int margin);
double interior_l2(const ScalarField& f, int margin);
double interior_l2(const VectorField& f, int margin);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace fieldmech
