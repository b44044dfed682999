#include "blot/fft.hpp"

#include <algorithm>
#include <cmath>

namespace blot::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void direct(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang =
                (inverse ? kTwoPi : -kTwoPi) * static_cast<double>(k * t % n) / static_cast<double>(n);
            acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    a = std::move(out);
}

}  // namespace

void transform(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.size() <= 1) return;
    if (is_pow2(a.size())) {
        radix2(a, inverse);
    } else {
        direct(a, inverse);
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(a.size());
        for (auto& v : a) v *= inv;
    }
}

void transform_2d(std::vector<std::complex<double>>& a, int rows, int cols, bool inverse) {
    std::vector<std::complex<double>> line;
    line.reserve(static_cast<std::size_t>(std::max(rows, cols)));
    for (int r = 0; r < rows; ++r) {
        line.assign(a.begin() + static_cast<std::size_t>(r) * cols,
                    a.begin() + static_cast<std::size_t>(r + 1) * cols);
        transform(line, inverse);
        std::copy(line.begin(), line.end(), a.begin() + static_cast<std::size_t>(r) * cols);
    }
    for (int c = 0; c < cols; ++c) {
        line.resize(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) line[r] = a[static_cast<std::size_t>(r) * cols + c];
        transform(line, inverse);
        for (int r = 0; r < rows; ++r) a[static_cast<std::size_t>(r) * cols + c] = line[r];
    }
}

}  // namespace blot::fft
