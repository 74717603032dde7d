#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

struct StencilEntry {
  int idx;
  double coeff;
};

// One-dimensional first-derivative stencil at index i of an axis of size n.
// Always three entries; the middle coefficient is zero for central rows.
inline void axis_stencil(int i, int n, double h, StencilEntry out[3]) {
  const double w = 1.0 / (2.0 * h);
  if (i == 0) {
    out[0] = {0, -3.0 * w};
    out[1] = {1, 4.0 * w};
    out[2] = {2, -1.0 * w};
  } else if (i == n - 1) {
    out[0] = {n - 1, 3.0 * w};
    out[1] = {n - 2, -4.0 * w};
    out[2] = {n - 3, 1.0 * w};
  } else {
    out[0] = {i - 1, -w};
    out[1] = {i, 0.0};
    out[2] = {i + 1, w};
  }
}

// Applies d/dx_axis to one scalar component stored in src (offset into a
// component-major array) writing into dst.
void apply_derivative(const Grid& g, const double* src, double* dst, int axis) {
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  StencilEntry st[3];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        int along = axis == 0 ? i : (axis == 1 ? j : k);
        int n = g.dim(axis);
        axis_stencil(along, n, g.spacing(), st);
        double acc = 0.0;
        for (const auto& e : st) {
          int ii = i, jj = j, kk = k;
          (axis == 0 ? ii : axis == 1 ? jj : kk) = e.idx;
          acc += e.coeff * src[g.index(ii, jj, kk)];
        }
        dst[g.index(i, j, k)] = acc;
      }
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  ScalarField r(f.grid());
  apply_derivative(f.grid(), f.data(), r.data(), axis);
  return r;
}

VectorField gradient(const ScalarField& f) {
  VectorField r(f.grid());
  const std::size_t n = f.grid().cell_count();
  for (int a = 0; a < 3; ++a)
    apply_derivative(f.grid(), f.data(), r.data() + a * n, a);
  return r;
}

ScalarField divergence(const VectorField& f) {
  const Grid& g = f.grid();
  const std::size_t n = g.cell_count();
  ScalarField r(g);
  std::vector<double> tmp(n);
  for (int a = 0; a < 3; ++a) {
    apply_derivative(g, f.data() + a * n, tmp.data(), a);
    for (std::size_t c = 0; c < n; ++c) r[c] += tmp[c];
  }
  return r;
}

VectorField curl(const VectorField& f) {
  const Grid& g = f.grid();
  const std::size_t n = g.cell_count();
  VectorField r(g);
  std::vector<double> d(n);
  // (curl f)_i = eps_ijk d_j f_k
  struct Term {
    int comp, axis, src;
    double sign;
  };
  static const Term terms[6] = {
      {0, 1, 2, +1.0}, {0, 2, 1, -1.0}, {1, 2, 0, +1.0},
      {1, 0, 2, -1.0}, {2, 0, 1, +1.0}, {2, 1, 0, -1.0},
  };
  for (const auto& t : terms) {
    apply_derivative(g, f.data() + t.src * n, d.data(), t.axis);
    double* out = r.data() + t.comp * n;
    for (std::size_t c = 0; c < n; ++c) out[c] += t.sign * d[c];
  }
  return r;
}

namespace {

// Scatter the transpose of apply_derivative: for each masked output cell,
// push its stencil coefficients back onto the source cells.
void scatter_derivative_adjoint(const Grid& g, const double* w, double* dst,
                                int axis, int margin) {
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  StencilEntry st[3];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!g.interior(i, j, k, margin)) continue;
        int along = axis == 0 ? i : (axis == 1 ? j : k);
        axis_stencil(along, g.dim(axis), g.spacing(), st);
        double ww = w[g.index(i, j, k)];
        for (const auto& e : st) {
          int ii = i, jj = j, kk = k;
          (axis == 0 ? ii : axis == 1 ? jj : kk) = e.idx;
          dst[g.index(ii, jj, kk)] += e.coeff * ww;
        }
      }
}

}  // namespace

ScalarField gradient_adjoint(const VectorField& w, int margin) {
  const Grid& g = w.grid();
  const std::size_t n = g.cell_count();
  ScalarField r(g);
  for (int a = 0; a < 3; ++a)
    scatter_derivative_adjoint(g, w.data() + a * n, r.data(), a, margin);
  return r;
}

VectorField divergence_adjoint(const ScalarField& w, int margin) {
  const Grid& g = w.grid();
  const std::size_t n = g.cell_count();
  VectorField r(g);
  for (int a = 0; a < 3; ++a)
    scatter_derivative_adjoint(g, w.data(), r.data() + a * n, a, margin);
  return r;
}

VectorField curl_adjoint(const VectorField& w, int margin) {
  const Grid& g = w.grid();
  const std::size_t n = g.cell_count();
  VectorField r(g);
  struct Term {
    int comp, axis, src;
    double sign;
  };
  static const Term terms[6] = {
      {0, 1, 2, +1.0}, {0, 2, 1, -1.0}, {1, 2, 0, +1.0},
      {1, 0, 2, -1.0}, {2, 0, 1, +1.0}, {2, 1, 0, -1.0},
  };
  // curl output component t.comp reads source component t.src; the adjoint
  // scatters weight w[comp] through the derivative transpose into src.
  std::vector<double> tmp(n);
  for (const auto& t : terms) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    scatter_derivative_adjoint(g, w.data() + t.comp * n, tmp.data(), t.axis,
                               margin);
    double* out = r.data() + t.src * n;
    for (std::size_t c = 0; c < n; ++c) out[c] += t.sign * tmp[c];
  }
  return r;
}

}  // namespace fieldmech
