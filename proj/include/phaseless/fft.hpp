#pragma once

#include "phaseless/types.hpp"

namespace phaseless {

// Unnormalized complex DFT, out[j] = sum_k in[k] exp(sign 2 pi i j k / n).
// sign must be +1 or -1. in and out may alias.
void fft(const cplx* in, cplx* out, std::size_t n, int sign);
std::vector<cplx> fft(const std::vector<cplx>& in, int sign);

// Centered dual grid: step 1/(count*step), same count, start at -count/2 bins.
GridSpec dual_grid(const GridSpec& g);

// Continuous-transform sum on uniform grids,
//   out[j] = gin.step * sum_k in[k] exp(sign 2 pi i u_j v_k),
// u over gout, v over gin, evaluated with one FFT. Requires the duality
// condition gout.step * gin.step * gin.count == 1 (1e-9 relative) and
// gout.count <= gin.count.
std::vector<cplx> dft_uniform(const std::vector<cplx>& in, const GridSpec& gin,
                              const GridSpec& gout, int sign);

}
