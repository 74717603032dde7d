#include "fieldmech/deposit.hpp"

#include <cmath>

namespace fieldmech {

namespace {

struct KernelAxis {
  int base;        // lower of the two cells touched
  double w0, w1;   // weights of base and base+1
};

// Triangular kernel along one axis. At a cell center all weight lands on one
// cell; between centers it splits linearly.
inline KernelAxis kernel_axis(const Grid& g, double pos, int axis) {
  double u = g.frac_index(pos, axis);
  double fl = std::floor(u);
  int base = static_cast<int>(fl);
  double t = u - fl;
  // u exactly on the last touched center: keep the kernel two-cell shaped.
  if (base >= g.dim(axis) - 1) {
    base = g.dim(axis) - 2;
    t = u - base;
  }
  return {base, 1.0 - t, t};
}

struct Kernel {
  KernelAxis ax[3];
};

inline Kernel kernel_at(const Grid& g, const Vec3& x, const char* where) {
  if (!x.finite()) throw Error(std::string(where) + ": non-finite position");
  if (!g.in_safe_region(x))
    throw Error(std::string(where) + ": position outside the safe region");
  return {{kernel_axis(g, x.x, 0), kernel_axis(g, x.y, 1),
           kernel_axis(g, x.z, 2)}};
}

template <typename F>
inline void for_kernel(const Kernel& k, F&& f) {
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        double w = (dx ? k.ax[0].w1 : k.ax[0].w0) *
                   (dy ? k.ax[1].w1 : k.ax[1].w0) *
                   (dz ? k.ax[2].w1 : k.ax[2].w0);
        f(k.ax[0].base + dx, k.ax[1].base + dy, k.ax[2].base + dz, w);
      }
}

// Derivative of the per-axis weight pair with respect to position. The
// triangular kernel slope is +-1/h; at exact centers (t == 0) the symmetric
// convention dw/dx = (-1/h, +1/h) still applies to the two-cell pair.
inline void kernel_axis_deriv(const Grid& g, double /*pos*/, double& d0,
                              double& d1) {
  d0 = -1.0 / g.spacing();
  d1 = +1.0 / g.spacing();
}

}  // namespace

ScalarField deposit_point(double q, const Vec3& x, const Grid& g) {
  if (!std::isfinite(q)) throw Error("deposit_point: non-finite charge");
  Kernel k = kernel_at(g, x, "deposit_point");
  ScalarField rho(g);
  double inv_v = 1.0 / g.cell_volume();
  for_kernel(k, [&](int i, int j, int kk, double w) {
    rho(i, j, kk) += q * w * inv_v;
  });
  return rho;
}

ScalarField deposit_line(double q, const Vec3& r, const Grid& g,
                         const std::function<double(double)>& weight,
                         int nodes) {
  if (nodes < 1) throw Error("deposit_line: need at least one node");
  if (!g.segment_in_safe_region(r))
    throw Error("deposit_line: segment leaves the safe region");
  ScalarField rho(g);
  double inv_v = 1.0 / g.cell_volume();
  for (int n = 0; n < nodes; ++n) {
    double u = (n + 0.5) / nodes;
    double w_u = weight ? weight(u) : 1.0;
    Kernel k = kernel_at(g, r * u, "deposit_line");
    for_kernel(k, [&](int i, int j, int kk, double w) {
      rho(i, j, kk) += q * w_u * w * inv_v / nodes;
    });
  }
  return rho;
}

double interpolate(const ScalarField& f, const Vec3& x) {
  Kernel k = kernel_at(f.grid(), x, "interpolate");
  double acc = 0.0;
  for_kernel(k, [&](int i, int j, int kk, double w) { acc += w * f(i, j, kk); });
  return acc;
}

Vec3 interpolate(const VectorField& f, const Vec3& x) {
  Kernel k = kernel_at(f.grid(), x, "interpolate");
  Vec3 acc;
  for_kernel(k, [&](int i, int j, int kk, double w) {
    acc += w * f.vec(i, j, kk);
  });
  return acc;
}

std::array<Vec3, 3> interpolate_jacobian(const VectorField& f, const Vec3& x) {
  const Grid& g = f.grid();
  Kernel k = kernel_at(g, x, "interpolate_jacobian");
  double d[3][2];
  for (int a = 0; a < 3; ++a) kernel_axis_deriv(g, x[a], d[a][0], d[a][1]);
  std::array<Vec3, 3> jac{};  // jac[comp][axis] = d f_comp(x) / d x_axis
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        double wx = dx ? k.ax[0].w1 : k.ax[0].w0;
        double wy = dy ? k.ax[1].w1 : k.ax[1].w0;
        double wz = dz ? k.ax[2].w1 : k.ax[2].w0;
        double gx = (dx ? d[0][1] : d[0][0]) * wy * wz;
        double gy = wx * (dy ? d[1][1] : d[1][0]) * wz;
        double gz = wx * wy * (dz ? d[2][1] : d[2][0]);
        Vec3 v = f.vec(k.ax[0].base + dx, k.ax[1].base + dy, k.ax[2].base + dz);
        for (int c = 0; c < 3; ++c) {
          jac[c].x += v[c] * gx;
          jac[c].y += v[c] * gy;
          jac[c].z += v[c] * gz;
        }
      }
  return jac;
}

Vec3 interpolate_gradient(const ScalarField& f, const Vec3& x) {
  const Grid& g = f.grid();
  Kernel k = kernel_at(g, x, "interpolate_gradient");
  double d[3][2];
  for (int a = 0; a < 3; ++a) kernel_axis_deriv(g, x[a], d[a][0], d[a][1]);
  Vec3 grad;
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        double wx = dx ? k.ax[0].w1 : k.ax[0].w0;
        double wy = dy ? k.ax[1].w1 : k.ax[1].w0;
        double wz = dz ? k.ax[2].w1 : k.ax[2].w0;
        double v = f(k.ax[0].base + dx, k.ax[1].base + dy, k.ax[2].base + dz);
        grad.x += v * (dx ? d[0][1] : d[0][0]) * wy * wz;
        grad.y += v * wx * (dy ? d[1][1] : d[1][0]) * wz;
        grad.z += v * wx * wy * (dz ? d[2][1] : d[2][0]);
      }
  return grad;
}

double line_integral(const ScalarField& f, const Vec3& r,
                     const std::function<double(double)>& weight, int nodes) {
  if (nodes < 1) throw Error("line_integral: need at least one node");
  if (!f.grid().segment_in_safe_region(r))
    throw Error("line_integral: segment leaves the safe region");
  double acc = 0.0;
  for (int n = 0; n < nodes; ++n) {
    double u = (n + 0.5) / nodes;
    double w = weight ? weight(u) : 1.0;
    acc += w * interpolate(f, r * u);
  }
  return acc / nodes;
}

Vec3 line_integral(const VectorField& f, const Vec3& r,
                   const std::function<double(double)>& weight, int nodes) {
  if (nodes < 1) throw Error("line_integral: need at least one node");
  if (!f.grid().segment_in_safe_region(r))
    throw Error("line_integral: segment leaves the safe region");
  Vec3 acc;
  for (int n = 0; n < nodes; ++n) {
    double u = (n + 0.5) / nodes;
    double w = weight ? weight(u) : 1.0;
    acc += w * interpolate(f, r * u);
  }
  return acc / nodes;
}

}  // namespace fieldmech
