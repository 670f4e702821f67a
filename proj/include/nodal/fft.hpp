#pragma once
#include <complex>
#include <vector>

namespace nodal::fft {

// In-place radix-2 FFT; size must be a power of two.
// sign = -1: forward (e^{-i 2 pi jk/N}), sign = +1: inverse without the 1/N.
void transform(std::vector<std::complex<double>>& a, int sign);

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& a);
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& a);  // includes 1/N

bool is_power_of_two(size_t n);

}  // namespace nodal::fft
