#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blot {

// Violated precondition or malformed request. CLI maps this to exit code 1.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem or decode failure. CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a salt.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// Deterministic RNG. The generator and every distribution are pinned here so
// results do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_{splitmix64(seed), splitmix64(seed ^ 0xda3e39cb94b95bdbull)} {
        if (s_[0] == 0 && s_[1] == 0) s_[1] = 1;
    }

    std::uint64_t next_u64() {
        // xoroshiro128++
        const std::uint64_t a = s_[0];
        std::uint64_t b = s_[1];
        const std::uint64_t r = rotl(a + b, 17) + a;
        b ^= a;
        s_[0] = rotl(a, 49) ^ b ^ (b << 21);
        s_[1] = rotl(b, 28);
        return r;
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Box-Muller; uncached so the draw count per call is fixed.
    double normal(double mean = 0.0, double stddev = 1.0) {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[2];
};

// Dense row-major matrix of doubles, the interchange type between feature
// extraction and the classifiers.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
    void push_row(std::span<const double> v) {
        if (rows == 0 && cols == 0) cols = v.size();
        if (v.size() != cols) throw ContractError("Matrix::push_row: dimension mismatch");
        data.insert(data.end(), v.begin(), v.end());
        ++rows;
    }
};

}  // namespace blot
