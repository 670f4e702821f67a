#include "nodal/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace nodal::fft {

bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void transform(std::vector<std::complex<double>>& a, int sign) {
  const size_t n = a.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& a) {
  auto out = a;
  transform(out, -1);
  return out;
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& a) {
  auto out = a;
  transform(out, +1);
  const double inv = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= inv;
  return out;
}

}  // namespace nodal::fft
