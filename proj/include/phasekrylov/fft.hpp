#pragma once

#include <complex>

namespace pk::fft {

using cplx = std::complex<double>;

// Unnormalized in-place transforms. sign = -1 is e^{-2 pi i jk/n}, +1 is e^{+2 pi i jk/n}.
void dft(cplx* data, int n, int sign);
void dft2(cplx* data, int n0, int n1, int sign);

// FFT bin of a signed frequency index in [-n/2, n/2)
inline int bin(int k, int n) { return ((k % n) + n) % n; }

} // namespace pk::fft
