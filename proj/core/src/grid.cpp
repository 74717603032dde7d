#include "fieldmech/grid.hpp"

#include <algorithm>

namespace fieldmech {

Grid::Grid(int nx, int ny, int nz, double spacing) : n_{nx, ny, nz}, h_(spacing) {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 4)
      throw Error("Grid: dim " + std::to_string(n_[a]) +
                  " too small for the stencil width (need >= 4)");
    if (n_[a] % 2 == 0)
      throw Error("Grid: dims must be odd so the origin is a cell center, got " +
                  std::to_string(n_[a]));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error("Grid: spacing must be positive and finite");
}

bool ScalarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

bool VectorField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw Error(std::string(where) + ": grid mismatch");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField+");
  ScalarField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r[c] = a[c] + b[c];
  return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField-");
  ScalarField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r[c] = a[c] - b[c];
  return r;
}

ScalarField operator*(double s, const ScalarField& a) {
  ScalarField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r[c] = s * a[c];
  return r;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "VectorField+");
  VectorField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r.data()[c] = a.data()[c] + b.data()[c];
  return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "VectorField-");
  VectorField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r.data()[c] = a.data()[c] - b.data()[c];
  return r;
}

VectorField operator*(double s, const VectorField& a) {
  VectorField r(a.grid());
  for (std::size_t c = 0; c < r.size(); ++c) r.data()[c] = s * a.data()[c];
  return r;
}

namespace {

template <typename F>
void for_interior(const Grid& g, int margin, F&& f) {
  for (int k = margin; k < g.nz() - margin; ++k)
    for (int j = margin; j < g.ny() - margin; ++j)
      for (int i = margin; i < g.nx() - margin; ++i) f(i, j, k);
}

}  // namespace

double interior_max_abs(const ScalarField& f, int margin) {
  double m = 0.0;
  for_interior(f.grid(), margin, [&](int i, int j, int k) {
    m = std::max(m, std::abs(f(i, j, k)));
  });
  return m;
}

double interior_max_abs(const VectorField& f, int margin) {
  double m = 0.0;
  for_interior(f.grid(), margin, [&](int i, int j, int k) {
    for (int a = 0; a < 3; ++a) m = std::max(m, std::abs(f.at(a, i, j, k)));
  });
  return m;
}

double interior_inner(const ScalarField& a, const ScalarField& b, int margin) {
  require_same_grid(a.grid(), b.grid(), "interior_inner");
  double s = 0.0;
  for_interior(a.grid(), margin,
               [&](int i, int j, int k) { s += a(i, j, k) * b(i, j, k); });
  return s * a.grid().cell_volume();
}

double interior_inner(const VectorField& a, const VectorField& b, int margin) {
  require_same_grid(a.grid(), b.grid(), "interior_inner");
  double s = 0.0;
  for_interior(a.grid(), margin, [&](int i, int j, int k) {
    for (int c = 0; c < 3; ++c) s += a.at(c, i, j, k) * b.at(c, i, j, k);
  });
  return s * a.grid().cell_volume();
}

double interior_l2(const ScalarField& f, int margin) {
  return std::sqrt(interior_inner(f, f, margin));
}

double interior_l2(const VectorField& f, int margin) {
  return std::sqrt(interior_inner(f, f, margin));
}

}  // namespace fieldmech
