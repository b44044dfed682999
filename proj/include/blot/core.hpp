#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "blot/common.hpp"

namespace blot {

// Reserved label for genuine (non-generated) sources.
inline constexpr const char* kPristineLabel = "pristine";

using SourceLabel = std::string;

// Row-major luminance raster with values in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

enum class FeatureFamily { FftPeaks, PatchFftPeaks, Glcm, FftGlcm };

std::string family_name(FeatureFamily f);
FeatureFamily family_from_name(const std::string& name);
std::vector<FeatureFamily> all_families();

// Fixed-length descriptor tagged with the family and noise extractor that
// produced it. `extractor` uses the stable method names ("mandelli-t", ...).
struct FeatureVector {
    std::vector<double> values;
    FeatureFamily family = FeatureFamily::FftPeaks;
    std::string extractor;

    std::size_t dim() const { return values.size(); }
};

struct ManifestEntry {
    std::filesystem::path path;  // relative to root
    SourceLabel label;
};

struct DatasetManifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;

    // Unique labels in sorted order.
    std::vector<SourceLabel> labels() const;
    std::filesystem::path resolve(std::size_t i) const { return root / entries[i].path; }
};

// Decodes PNG, TIFF (8/16-bit) or PGM into luminance. RGB inputs are reduced
// with BT.601 weights (0.299 R + 0.587 G + 0.114 B); integer depths scale to
// [0, 1] with full-scale mapping to 1.
GrayImage load_image(const std::filesystem::path& path);

// Writes a 16-bit grayscale PNG; values are clamped to [0, 1] first.
void write_png_gray16(const GrayImage& img, const std::filesystem::path& path);

// Centered size x size crop. Dimensions smaller than `size` are symmetric
// reflect-padded up to `size` before cropping. Requires size >= 16.
GrayImage central_crop(const GrayImage& img, int size);

// Checks existence of root and every entry path.
DatasetManifest load_manifest(const std::filesystem::path& json_path);
void save_manifest(const DatasetManifest& m, const std::filesystem::path& json_path);
DatasetManifest filter_manifest(const DatasetManifest& m, const std::vector<SourceLabel>& keep);
std::vector<DatasetManifest> split_manifest_by_label(const DatasetManifest& m);

// CSV persistence: header row `label,extractor,family,v0..vN`. Values are
// printed with enough digits that a reload reproduces them bit-exactly.
void save_features(const std::vector<std::pair<FeatureVector, SourceLabel>>& rows,
                   const std::filesystem::path& path);
std::vector<std::pair<FeatureVector, SourceLabel>> load_features(const std::filesystem::path& path);

}  // namespace blot
