#pragma once

namespace qpi {

// Numerical tolerances shared by every module. Elementwise comparisons of
// matrix entries use `elementwise`; anything that goes through an
// eigendecomposition (spectra, entropies) uses the looser `spectral`.
struct Tolerances {
  double elementwise = 1e-12;
  double spectral = 1e-10;
};

inline constexpr Tolerances kTol{};

// Worker-thread cap. Reads QKDD_THREADS; falls back to the hardware
// concurrency. Always >= 1. Results never depend on the thread count.
int worker_threads();

}  // namespace qpi
