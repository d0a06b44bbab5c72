#pragma once

#include <complex>

namespace stereo {

using cplx = std::complex<double>;

// Principal branch of log Gamma, continuous off the non-positive real axis.
cplx lgamma(cplx z);
cplx gamma(cplx z);
cplx lbeta(cplx a, cplx b);
cplx beta(cplx a, cplx b);

// Rising factorial (s)_n = s (s+1) ... (s+n-1).
cplx rising(cplx s, int n);

}  // namespace stereo
