#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <vector>

#include "penlmc/kernels.hpp"

namespace penlmc::kernels {
namespace {

void ou_bridge_block_neon(const double* z, int width, int nsteps,
                          double sqrt_dt, const double* wts, int na,
                          const int* snaps, int nsnap, double* B_out,
                          double* G_out) {
  std::vector<double> B(width, 0.0);
  std::vector<double> G(static_cast<std::size_t>(na) * width, 0.0);
  const float64x2_t vsd = vdupq_n_f64(sqrt_dt);
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
    for (int j = 0; j + 2 <= width; j += 2) {
      const float64x2_t zb = vmulq_f64(vld1q_f64(zk + j), vsd);
      vst1q_f64(B.data() + j, vaddq_f64(vld1q_f64(B.data() + j), zb));
      for (int a = 0; a < na; ++a) {
        const float64x2_t w = vdupq_n_f64(wts[a * nsteps + k]);
        double* Ga = G.data() + a * width + j;
        vst1q_f64(Ga, vfmaq_f64(vld1q_f64(Ga), w, zb));
      }
    }
    if (width & 1) {
      const int j = width - 1;
      const double zb = zk[j] * sqrt_dt;
      B[j] += zb;
      for (int a = 0; a < na; ++a)
        G[a * width + j] += wts[a * nsteps + k] * zb;
    }
  }
}

void sqdist_matrix_neon(const double* A, const double* Bt, int n, int m,
                        int p, double* out) {
  for (int i = 0; i < n; ++i) {
    double* row = out + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) row[j] = 0.0;
    for (int k = 0; k < p; ++k) {
      const double av = A[static_cast<std::size_t>(i) * p + k];
      const float64x2_t aik = vdupq_n_f64(av);
      const double* bk = Bt + static_cast<std::size_t>(k) * m;
      int j = 0;
      for (; j + 2 <= m; j += 2) {
        const float64x2_t d = vsubq_f64(aik, vld1q_f64(bk + j));
        vst1q_f64(row + j, vfmaq_f64(vld1q_f64(row + j), d, d));
      }
      for (; j < m; ++j) {
        const double d = av - bk[j];
        row[j] += d * d;
      }
    }
  }
}

void project_points_neon(const double* pts, int n, int p, const double* dir,
                         double* out) {
  if (p == 2) {
    const float64x2_t d = vld1q_f64(dir);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
      const float64x2x2_t rows = vld2q_f64(pts + 2 * i);  // deinterleave
      const float64x2_t acc =
          vfmaq_f64(vmulq_f64(rows.val[1], vdupq_n_f64(dir[1])), rows.val[0],
                    vdupq_n_f64(dir[0]));
      vst1q_f64(out + i, acc);
    }
    (void)d;
    for (; i < n; ++i) out[i] = pts[2 * i] * dir[0] + pts[2 * i + 1] * dir[1];
    return;
  }
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = pts + static_cast<std::size_t>(i) * p;
    for (int k = 0; k < p; ++k) acc += row[k] * dir[k];
    out[i] = acc;
  }
}

}  // namespace

const KernelOps& neon_kernels() {
  static const KernelOps ops{"neon", ou_bridge_block_neon, sqdist_matrix_neon,
                             project_points_neon};
  return ops;
}

}  // namespace penlmc::kernels

#else
#include "penlmc/kernels.hpp"
namespace penlmc::kernels {
const KernelOps& neon_kernels() { return scalar_kernels(); }
}  // namespace penlmc::kernels
#endif
