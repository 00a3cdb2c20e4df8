#include "nlch/fft.hpp"

#include <cmath>
#include <numbers>

#include "nlch/errors.hpp"

namespace nlch::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::complex<double>* data, std::size_t n, bool inverse) {
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = data[i + j];
                const std::complex<double> v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) data[i] *= inv;
    }
}

void transform_nd(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
                  bool inverse) {
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    if (data.size() != total) throw ConfigError("fft data size does not match dims");

    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
        const std::size_t n = static_cast<std::size_t>(dims[axis]);
        std::size_t stride = 1;
        for (std::size_t ax = dims.size() - 1; ax > axis; --ax) stride *= static_cast<std::size_t>(dims[ax]);
        const std::size_t lines = total / n;
        std::vector<std::complex<double>> line(n);
        for (std::size_t l = 0; l < lines; ++l) {
            const std::size_t block = l / stride;
            const std::size_t offset = l % stride;
            const std::size_t base = block * stride * n + offset;
            if (stride == 1) {
                transform(data.data() + base, n, inverse);
            } else {
                for (std::size_t q = 0; q < n; ++q) line[q] = data[base + q * stride];
                transform(line.data(), n, inverse);
                for (std::size_t q = 0; q < n; ++q) data[base + q * stride] = line[q];
            }
        }
    }
}

} // namespace nlch::fft
