#pragma once

#include <string>
#include <vector>

#include "blot/core.hpp"

namespace blot {

enum class NoiseMethod {
    MandelliT,
    BammeyC,
    Gaussian,
    Mean,
    KirchnerK,
    PMap,
    NonLocalMeans,
    NoExtraction,
};

// Stable names used by CLI flags and feature-file tags.
std::string method_name(NoiseMethod m);
NoiseMethod method_from_name(const std::string& name);
std::vector<NoiseMethod> all_noise_methods();

struct Kernel {
    int rows = 0;
    int cols = 0;
    std::vector<double> weights;

    double at(int r, int c) const { return weights[static_cast<std::size_t>(r) * cols + c]; }
    double sum() const;
};

// The four fixed extraction kernels.
Kernel kernel_t();  // 4-neighbor average, sums to 1
Kernel kernel_c();  // 2x2 cross difference, sums to 0
Kernel kernel_m();  // 8-neighbor mean, sums to 1
Kernel kernel_k();  // resampling-residue kernel, sums to 1
// Discrete truncated Gaussian normalized to sum 1 ((2*radius+1)^2 taps).
Kernel gaussian_kernel(double sigma, int radius);
// 1-D slice of the same Gaussian, for the separable fast path.
std::vector<double> gaussian_kernel_1d(double sigma, int radius);

// Signed noise plane with the same dimensions as its source crop.
struct Residual {
    int width = 0;
    int height = 0;
    std::vector<double> data;
    NoiseMethod method = NoiseMethod::NoExtraction;

    Residual() = default;
    Residual(int w, int h, NoiseMethod m = NoiseMethod::NoExtraction)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0), method(m) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return data.size(); }
};

// 2-D correlation with symmetric (reflected) borders; output size equals
// input size. Odd kernels are centered; even kernels anchor at their
// top-left tap. Every shipped kernel is symmetric, so this coincides with
// convolution for them.
Residual conv2d_reflect(const GrayImage& img, const Kernel& k);

// Residual = image - conv(image, k). Requires the kernel to sum to 1.
Residual predictor_residual(const GrayImage& img, const Kernel& k);

// Residual = conv(image, k) for zero-sum kernels, which are already
// high-pass filters.
Residual highpass_residual(const GrayImage& img, const Kernel& k);

struct PMapParams {
    int radius = 1;       // 1 -> 8 neighbors, 2 -> 24 neighbors
    int max_iters = 50;
    double tol = 1e-6;
};

// Expectation-maximization resampling detector. Returns the per-pixel
// probability (in [0, 1]) that the pixel is a linear combination of its
// neighbors under the fitted weights; the map itself is fed downstream as
// the residual.
Residual pmap_residual(const GrayImage& img, const PMapParams& p = {});

struct NlmParams {
    double strength = 0.1;   // h in the exponential weight
    int patch = 7;           // odd, >= 3
    int window = 21;         // odd, > patch
    double noise_sigma = 0;  // subtracted as 2*sigma^2 from patch distances
};

// Residual = image - non-local-means(image). Patch similarity weight is
// exp(-max(d^2 - 2*sigma^2, 0) / h^2) with d^2 the mean squared patch
// difference.
Residual nlmeans_residual(const GrayImage& img, const NlmParams& p = {});

struct NoiseParams {
    PMapParams pmap;
    NlmParams nlm;
    // Open variant of the cross-kernel method: subtract the convolution from
    // the image instead of taking it directly.
    bool bammey_subtract = false;
};

// Dispatches to the extraction procedure for `m`. NoExtraction returns the
// zero-mean image itself.
Residual extract(const GrayImage& img, NoiseMethod m, const NoiseParams& p = {});

}  // namespace blot
