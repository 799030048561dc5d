// Thin FFTW wrapper used by the grid and the coefficient quadrature.
#pragma once

#include <vector>

#include "latbump/lattice.hpp"

namespace latbump::detail {

/// Unnormalized in-place transform of a row-major array with `dim` axes of
/// length `len` each: out[k] = sum_j in[j] exp(sign * 2 pi i j.k / len).
/// Plain (uncentered) index order.
void fft_inplace(std::vector<cplx>& data, int dim, int len, int sign);

/// Same transform for centered index order: both input and output index i
/// stands for the integer i - len/2 (len must be even).
void centered_fft_inplace(std::vector<cplx>& data, int dim, int len, int sign);

}  // namespace latbump::detail
