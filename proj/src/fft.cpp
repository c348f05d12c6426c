#include "opfunc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace opfunc {

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: size must be a nonzero power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

void fft_nd(std::vector<std::complex<double>>& a, const std::vector<int>& dims,
            bool inverse) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (a.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

  // Transform along each axis in turn; row-major layout.
  std::size_t stride_after = 1;  // product of extents after the current axis
  for (int axis = static_cast<int>(dims.size()) - 1; axis >= 0; --axis) {
    const std::size_t len = static_cast<std::size_t>(dims[axis]);
    const std::size_t block = len * stride_after;
    std::vector<std::complex<double>> line(len);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride_after; ++off) {
        for (std::size_t k = 0; k < len; ++k)
          line[k] = a[base + off + k * stride_after];
        fft_pow2(line, inverse);
        for (std::size_t k = 0; k < len; ++k)
          a[base + off + k * stride_after] = line[k];
      }
    }
    stride_after = block;
  }
}

}  // namespace opfunc
