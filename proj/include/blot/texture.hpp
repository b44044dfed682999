#pragma once

#include <filesystem>
#include <vector>

#include "blot/core.hpp"
#include "blot/noise.hpp"

namespace blot {

enum class Direction { Horizontal, Vertical };

// Normalized gray-level co-occurrence matrix (not symmetrized).
struct CoocMatrix {
    int levels = 0;
    std::vector<double> probs;

    double at(int i, int j) const { return probs[static_cast<std::size_t>(i) * levels + j]; }
    double& at(int i, int j) { return probs[static_cast<std::size_t>(i) * levels + j]; }
};

struct TextureParams {
    std::vector<int> distances = {4, 8, 16, 32};
    int levels = 64;
    // 5 statistics x |distances| x 2 directions features total.
    std::size_t dim() const { return 5 * distances.size() * 2; }
};

struct QuantizedImage {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<int> bins;

    int at(int r, int c) const { return bins[static_cast<std::size_t>(r) * width + c]; }
};

// Clips the residual to mean +- 3 sigma and bins uniformly. A constant
// residual maps entirely to bin 0.
QuantizedImage quantize(const Residual& res, int levels);

// Pair counts (q[r,c], q[r,c+d]) horizontally or (q[r,c], q[r+d,c])
// vertically, normalized to sum 1.
CoocMatrix glcm(const QuantizedImage& q, int distance, Direction dir);

struct Haralick5 {
    double contrast = 0.0;
    double homogeneity = 0.0;
    double dissimilarity = 0.0;
    double energy = 0.0;
    double correlation = 0.0;
};

Haralick5 haralick5(const CoocMatrix& m);

// Centered magnitude of the 2-D DFT of the zero-meaned matrix, renormalized
// to sum 1 so the Haralick statistics stay well-defined. Returns an
// all-zero matrix when the spectrum sums to 0 (constant input).
CoocMatrix cooc_spectrum(const CoocMatrix& m);

// 40-dim descriptors; concatenation order is directions (H then V) outer,
// distances middle, the five statistics inner.
FeatureVector glcm_vector(const GrayImage& img, NoiseMethod method, const NoiseParams& np = {},
                          const TextureParams& params = {});
FeatureVector fft_glcm_vector(const GrayImage& img, NoiseMethod method, const NoiseParams& np = {},
                              const TextureParams& params = {});

// Same descriptors computed from an already-extracted residual, so callers
// can share one extraction across feature families.
FeatureVector glcm_vector_from_residual(const Residual& res, const TextureParams& params = {});
FeatureVector fft_glcm_vector_from_residual(const Residual& res, const TextureParams& params = {});

void write_glcm_csv(const CoocMatrix& m, const std::filesystem::path& path);

}  // namespace blot
