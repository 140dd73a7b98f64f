#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <vector>

#include "penlmc/kernels.hpp"

namespace penlmc::kernels {
namespace {

// width must be a multiple of 4 (the dispatcher's callers pad blocks).
void ou_bridge_block_avx2(const double* z, int width, int nsteps,
                          double sqrt_dt, const double* wts, int na,
                          const int* snaps, int nsnap, double* B_out,
                          double* G_out) {
  std::vector<double> B(width, 0.0);
  std::vector<double> G(static_cast<std::size_t>(na) * width, 0.0);
  const __m256d vsd = _mm256_set1_pd(sqrt_dt);
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
    for (int j = 0; j + 4 <= width; j += 4) {
      const __m256d zb = _mm256_mul_pd(_mm256_loadu_pd(zk + j), vsd);
      __m256d b = _mm256_loadu_pd(B.data() + j);
      _mm256_storeu_pd(B.data() + j, _mm256_add_pd(b, zb));
      for (int a = 0; a < na; ++a) {
        const __m256d w = _mm256_set1_pd(wts[a * nsteps + k]);
        double* Ga = G.data() + a * width + j;
        _mm256_storeu_pd(Ga, _mm256_fmadd_pd(w, zb, _mm256_loadu_pd(Ga)));
      }
    }
    for (int j = width & ~3; j < width; ++j) {
      const double zb = zk[j] * sqrt_dt;
      B[j] += zb;
      for (int a = 0; a < na; ++a)
        G[a * width + j] += wts[a * nsteps + k] * zb;
    }
  }
}

void sqdist_matrix_avx2(const double* A, const double* Bt, int n, int m,
                        int p, double* out) {
  for (int i = 0; i < n; ++i) {
    double* row = out + static_cast<std::size_t>(i) * m;
    int j = 0;
    for (; j + 4 <= m; j += 4) _mm256_storeu_pd(row + j, _mm256_setzero_pd());
    for (; j < m; ++j) row[j] = 0.0;
    for (int k = 0; k < p; ++k) {
      const __m256d aik =
          _mm256_set1_pd(A[static_cast<std::size_t>(i) * p + k]);
      const double* bk = Bt + static_cast<std::size_t>(k) * m;
      for (j = 0; j + 4 <= m; j += 4) {
        const __m256d d = _mm256_sub_pd(aik, _mm256_loadu_pd(bk + j));
        const __m256d acc = _mm256_loadu_pd(row + j);
        _mm256_storeu_pd(row + j, _mm256_fmadd_pd(d, d, acc));
      }
      const double av = A[static_cast<std::size_t>(i) * p + k];
      for (j = m & ~3; j < m; ++j) {
        const double d = av - bk[j];
        row[j] += d * d;
      }
    }
  }
}

void project_points_avx2(const double* pts, int n, int p, const double* dir,
                         double* out) {
  if (p == 2) {
    const __m256d d0 = _mm256_set1_pd(dir[0]);
    const __m256d d1 = _mm256_set1_pd(dir[1]);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
      // rows i..i+3: [x0 y0 x1 y1 | x2 y2 x3 y3]
      const __m256d lo = _mm256_loadu_pd(pts + 2 * i);
      const __m256d hi = _mm256_loadu_pd(pts + 2 * i + 4);
      const __m256d xs =
          _mm256_unpacklo_pd(_mm256_permute2f128_pd(lo, hi, 0x20),
                             _mm256_permute2f128_pd(lo, hi, 0x31));
      const __m256d ys =
          _mm256_unpackhi_pd(_mm256_permute2f128_pd(lo, hi, 0x20),
                             _mm256_permute2f128_pd(lo, hi, 0x31));
      _mm256_storeu_pd(out + i,
                       _mm256_fmadd_pd(xs, d0, _mm256_mul_pd(ys, d1)));
    }
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

const KernelOps& avx2_kernels() {
  static const KernelOps ops{"avx2", ou_bridge_block_avx2, sqdist_matrix_avx2,
                             project_points_avx2};
  return ops;
}

}  // namespace penlmc::kernels

#else
#include "penlmc/kernels.hpp"
namespace penlmc::kernels {
const KernelOps& avx2_kernels() { return scalar_kernels(); }
}  // namespace penlmc::kernels
#endif
