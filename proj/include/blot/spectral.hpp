#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blot/core.hpp"
#include "blot/noise.hpp"

namespace blot {

// Centered DFT magnitude plane: index (size/2, size/2) is spatial frequency
// (0, 0), and the DC bin is exactly 0 because inputs are made zero-mean.
struct Spectrum {
    int size = 0;
    std::vector<double> mags;

    double at(int r, int c) const { return mags[static_cast<std::size_t>(r) * size + c]; }
    double& at(int r, int c) { return mags[static_cast<std::size_t>(r) * size + c]; }
};

// Normalized frequency pair, each component in [-1/2, 1/2].
struct Band {
    double fx = 0.0;
    double fy = 0.0;
    bool operator==(const Band&) const = default;
};

using BandSet = std::vector<Band>;

// All pairs with components in {0, +-1/4, +-1/3, +-1/2}, excluding (0,0),
// deduplicated under conjugate symmetry: 24 bands.
const BandSet& default_band_set();

// Human-readable band tag, e.g. "f(0.25,-0.5)".
std::string band_name(const Band& b);

// Parses "fx,fy;fx,fy;..." where each component is a fraction ("1/3") or a
// decimal.
BandSet parse_band_set(const std::string& text);

// Zero-mean 2-D DFT magnitudes of the residual, centered. No windowing.
Spectrum fft_magnitude(const Residual& res);

// Tiles the residual into non-overlapping patch x patch blocks, zero-means
// each tile and averages the per-tile magnitude spectra.
Spectrum patch_average_spectrum(const Residual& res, int patch);

// Peak statistic per band: max magnitude over the 3x3 bin neighborhood of
// the nearest bin, over the median of all nonzero magnitudes (+1e-12).
FeatureVector band_features(const Spectrum& spec, const BandSet& bands, FeatureFamily family,
                            const std::string& extractor_tag);

FeatureVector fft_peaks(const GrayImage& img, NoiseMethod method, const NoiseParams& np = {},
                        const BandSet& bands = default_band_set());
FeatureVector patch_fft_peaks(const GrayImage& img, NoiseMethod method, int patch,
                              const NoiseParams& np = {}, const BandSet& bands = default_band_set());

// Figure-reproduction exports.
void write_spectrum_pgm(const Spectrum& spec, const std::filesystem::path& path);
void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path);

}  // namespace blot
