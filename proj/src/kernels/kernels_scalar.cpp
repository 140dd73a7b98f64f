#include <vector>

#include "penlmc/kernels.hpp"

namespace penlmc::kernels {
namespace {

void ou_bridge_block_scalar(const double* z, int width, int nsteps,
                            double sqrt_dt, const double* wts, int na,
                            const int* snaps, int nsnap, double* B_out,
                            double* G_out) {
  std::vector<double> B(width, 0.0);
  std::vector<double> G(static_cast<std::size_t>(na) * width, 0.0);
  int snap = 0;
  for (int k = 0; k <= nsteps; ++k) {
    while (snap < nsnap && snaps[snap] == k) {
      for (int j = 0; j < width; ++j) B_out[snap * width + j] = B[j];
      for (int a = 0; a < na; ++a)
        for (int j = 0; j < width; ++j)
          G_out[(a * nsnap + snap) * width + j] = G[a * width + j];
      ++snap;
    }
    if (k == nsteps) break;
    const double* zk = z + static_cast<std::size_t>(k) * width;
    for (int j = 0; j < width; ++j) B[j] += sqrt_dt * zk[j];
    for (int a = 0; a < na; ++a) {
      const double w = wts[a * nsteps + k] * sqrt_dt;
      double* Ga = G.data() + a * width;
      for (int j = 0; j < width; ++j) Ga[j] += w * zk[j];
    }
  }
}

void sqdist_matrix_scalar(const double* A, const double* Bt, int n, int m,
                          int p, double* out) {
  for (int i = 0; i < n; ++i) {
    double* row = out + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) row[j] = 0.0;
    for (int k = 0; k < p; ++k) {
      const double aik = A[static_cast<std::size_t>(i) * p + k];
      const double* bk = Bt + static_cast<std::size_t>(k) * m;
      for (int j = 0; j < m; ++j) {
        const double d = aik - bk[j];
        row[j] += d * d;
      }
    }
  }
}

void project_points_scalar(const double* pts, int n, int p, const double* dir,
                           double* out) {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = pts + static_cast<std::size_t>(i) * p;
    for (int k = 0; k < p; ++k) acc += row[k] * dir[k];
    out[i] = acc;
  }
}

}  // namespace

const KernelOps& scalar_kernels() {
  static const KernelOps ops{"scalar", ou_bridge_block_scalar,
                             sqdist_matrix_scalar, project_points_scalar};
  return ops;
}

}  // namespace penlmc::kernels
