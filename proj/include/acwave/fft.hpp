#pragma once

// Thin deterministic wrapper over FFTW3 for the per-slice tangential
// transforms: unnormalized complex-to-complex DFTs over the trailing lattice
// dimensions of a slice-major array. Plans are created once per
// (dims, direction) with FFTW_ESTIMATE | FFTW_UNALIGNED — no runtime tuning
// and no alignment-dependent code paths — so repeated runs are bit-identical.

#include <complex>

namespace acwave::fft {

inline constexpr int kForward = -1;   // kernel e^{-i x.xi}
inline constexpr int kBackward = +1;  // kernel e^{+i x.xi}

// In-place unnormalized DFT of each of n_slices contiguous blocks of extent
// dims[0] x ... x dims[rank-1]. Plan lookup is mutex-guarded; execution is
// safe to run concurrently on disjoint buffers.
void dft_slices(std::complex<double>* data, int rank, const int* dims,
                long n_slices, int direction);

}  // namespace acwave::fft
