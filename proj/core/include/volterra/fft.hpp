#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace volterra {

/// In-place radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

/// Linear convolution out[n] = Σ_{j=0}^{n} a[j]·b[n-j] for n < a.size()+b.size()-1,
/// via zero-padded FFT.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace volterra
