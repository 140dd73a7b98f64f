#pragma once

#include <cstddef>

namespace penlmc::kernels {

// Data-parallel inner loops with a scalar reference implementation and a
// vectorized variant (AVX2+FMA on x86_64, NEON on aarch64) selected once at
// runtime. The two variants are equivalence-tested; results may differ by
// floating-point reassociation only.
struct KernelOps {
  const char* name;

  // Brownian-bridge functional accumulation for the kinetic noise oracle.
  // z holds nsteps x width standard normals (step-major: z[k*width + j]).
  // For every path j it accumulates
  //   B_t   = sum_{k < t} z_kj sqrt_dt
  //   G^a_t = sum_{k < t} wts[a][k] z_kj sqrt_dt      (wts[a][k] = e^{a k dt})
  // at the snapshot steps `snaps` (ascending, snaps[nsnap-1] == nsteps).
  // Outputs: B_out[s*width + j], G_out[(a*nsnap + s)*width + j].
  void (*ou_bridge_block)(const double* z, int width, int nsteps,
                          double sqrt_dt, const double* wts, int na,
                          const int* snaps, int nsnap, double* B_out,
                          double* G_out);

  // out[i*m + j] = sum_k (A[i*p + k] - Bt[k*m + j])^2
  // (Bt is the second point set transposed to p x m).
  void (*sqdist_matrix)(const double* A, const double* Bt, int n, int m,
                        int p, double* out);

  // out[i] = sum_k pts[i*p + k] * dir[k]
  void (*project_points)(const double* pts, int n, int p, const double* dir,
                         double* out);
};

const KernelOps& scalar_kernels();
#if defined(PENLMC_HAVE_AVX2_TU)
const KernelOps& avx2_kernels();
#endif
#if defined(PENLMC_HAVE_NEON_TU)
const KernelOps& neon_kernels();
#endif

// Picked once per process: the widest supported variant, or the scalar
// reference when PENLMC_FORCE_SCALAR is set in the environment.
const KernelOps& active_kernels();

}  // namespace penlmc::kernels
