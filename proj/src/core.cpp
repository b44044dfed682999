#include "blot/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "json.hpp"

namespace blot {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

double luminance601(double r, double g, double b) {
    if (r == g && g == b) return g;  // weights sum to 1: gray maps to itself exactly
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

int reflect_index(int i, int n) {
    // Symmetric reflection with edge repetition: -1 -> 0, n -> n-1.
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

}  // namespace

std::string family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::FftPeaks: return "FFT-PEAKS";
        case FeatureFamily::PatchFftPeaks: return "PATCH-FFT-PEAKS";
        case FeatureFamily::Glcm: return "GLCM";
        case FeatureFamily::FftGlcm: return "FFT-GLCM";
    }
    throw ContractError("unknown feature family");
}

FeatureFamily family_from_name(const std::string& name) {
    for (FeatureFamily f : all_families()) {
        if (family_name(f) == name) return f;
    }
    throw ContractError("unknown feature family: " + name);
}

std::vector<FeatureFamily> all_families() {
    return {FeatureFamily::FftPeaks, FeatureFamily::PatchFftPeaks, FeatureFamily::Glcm,
            FeatureFamily::FftGlcm};
}

std::vector<SourceLabel> DatasetManifest::labels() const {
    std::set<SourceLabel> uniq;
    for (const auto& e : entries) uniq.insert(e.label);
    return {uniq.begin(), uniq.end()};
}

GrayImage load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw IoError("image file does not exist: " + path.string());
    }
    const std::string ext = lower_ext(path);
    if (ext != ".png" && ext != ".tif" && ext != ".tiff" && ext != ".pgm") {
        throw IoError("unsupported image format '" + ext + "': " + path.string());
    }
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (m.empty()) {
        throw IoError("failed to decode image: " + path.string());
    }

    double scale = 1.0;
    switch (m.depth()) {
        case CV_8U: scale = 1.0 / 255.0; break;
        case CV_16U: scale = 1.0 / 65535.0; break;
        case CV_32F:
        case CV_64F: scale = 1.0; break;
        default:
            throw IoError("unsupported pixel depth in " + path.string());
    }

    GrayImage img(m.cols, m.rows);
    cv::Mat md;
    m.convertTo(md, CV_64F);
    if (md.channels() == 1) {
        for (int r = 0; r < m.rows; ++r) {
            const double* p = md.ptr<double>(r);
            for (int c = 0; c < m.cols; ++c) img.at(r, c) = p[c] * scale;
        }
    } else if (md.channels() == 3 || md.channels() == 4) {
        // OpenCV decodes color as BGR(A).
        const int ch = md.channels();
        for (int r = 0; r < m.rows; ++r) {
            const double* p = md.ptr<double>(r);
            for (int c = 0; c < m.cols; ++c) {
                const double b = p[c * ch + 0] * scale;
                const double g = p[c * ch + 1] * scale;
                const double rr = p[c * ch + 2] * scale;
                img.at(r, c) = luminance601(rr, g, b);
            }
        }
    } else {
        throw IoError("unsupported channel count in " + path.string());
    }
    for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
    return img;
}

void write_png_gray16(const GrayImage& img, const std::filesystem::path& path) {
    cv::Mat m(img.height, img.width, CV_16U);
    for (int r = 0; r < img.height; ++r) {
        auto* p = m.ptr<std::uint16_t>(r);
        for (int c = 0; c < img.width; ++c) {
            const double v = std::clamp(img.at(r, c), 0.0, 1.0);
            p[c] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        }
    }
    if (!cv::imwrite(path.string(), m)) {
        throw IoError("failed to write image: " + path.string());
    }
}

GrayImage central_crop(const GrayImage& img, int size) {
    if (size < 16) throw ContractError("central_crop: size must be >= 16");
    if (img.empty()) throw ContractError("central_crop: empty image");

    const GrayImage* src = &img;
    GrayImage padded;
    if (img.width < size || img.height < size) {
        const int w = std::max(img.width, size);
        const int h = std::max(img.height, size);
        padded = GrayImage(w, h);
        const int top = (h - img.height) / 2;
        const int left = (w - img.width) / 2;
        for (int r = 0; r < h; ++r) {
            const int sr = reflect_index(r - top, img.height);
            for (int c = 0; c < w; ++c) {
                padded.at(r, c) = img.at(sr, reflect_index(c - left, img.width));
            }
        }
        src = &padded;
    }
    const int r0 = (src->height - size) / 2;
    const int c0 = (src->width - size) / 2;
    GrayImage out(size, size);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) out.at(r, c) = src->at(r0 + r, c0 + c);
    }
    return out;
}

DatasetManifest load_manifest(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw IoError("cannot open manifest: " + json_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("malformed manifest " + json_path.string() + ": " + e.what());
    }
    DatasetManifest m;
    if (!j.contains("root") || !j.contains("entries")) {
        throw IoError("manifest missing root/entries: " + json_path.string());
    }
    m.root = j["root"].get<std::string>();
    if (m.root.is_relative()) m.root = json_path.parent_path() / m.root;
    for (const auto& e : j["entries"]) {
        m.entries.push_back({e.at("path").get<std::string>(), e.at("label").get<std::string>()});
    }
    if (m.entries.empty()) throw ContractError("manifest has no entries: " + json_path.string());
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        if (!std::filesystem::exists(m.resolve(i))) {
            throw IoError("manifest entry missing on disk: " + m.resolve(i).string());
        }
    }
    return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& json_path) {
    nlohmann::json j;
    j["root"] = m.root.string();
    j["entries"] = nlohmann::json::array();
    for (const auto& e : m.entries) {
        j["entries"].push_back({{"path", e.path.string()}, {"label", e.label}});
    }
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write manifest: " + json_path.string());
    out << j.dump(2) << "\n";
}

DatasetManifest filter_manifest(const DatasetManifest& m, const std::vector<SourceLabel>& keep) {
    DatasetManifest out;
    out.root = m.root;
    for (const auto& e : m.entries) {
        if (std::find(keep.begin(), keep.end(), e.label) != keep.end()) out.entries.push_back(e);
    }
    return out;
}

std::vector<DatasetManifest> split_manifest_by_label(const DatasetManifest& m) {
    std::vector<DatasetManifest> out;
    for (const auto& label : m.labels()) out.push_back(filter_manifest(m, {label}));
    return out;
}

void save_features(const std::vector<std::pair<FeatureVector, SourceLabel>>& rows,
                   const std::filesystem::path& path) {
    std::size_t dim = 0;
    if (!rows.empty()) {
        dim = rows.front().first.dim();
        const FeatureFamily fam = rows.front().first.family;
        for (const auto& [vec, label] : rows) {
            if (vec.dim() != dim || vec.family != fam) {
                throw ContractError("save_features: mixed feature dims or families");
            }
            for (double v : vec.values) {
                if (!std::isfinite(v)) {
                    throw ContractError("save_features: non-finite value in vector labeled '" +
                                        label + "'");
                }
            }
        }
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write feature file: " + path.string());
    out << "label,extractor,family";
    for (std::size_t i = 0; i < dim; ++i) out << ",v" << i;
    out << "\n";
    char buf[64];
    for (const auto& [vec, label] : rows) {
        out << label << "," << vec.extractor << "," << family_name(vec.family);
        for (double v : vec.values) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

std::vector<std::pair<FeatureVector, SourceLabel>> load_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty feature file: " + path.string());

    std::vector<std::pair<FeatureVector, SourceLabel>> rows;
    std::size_t dim = std::string::npos;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string label, extractor, family, cell;
        if (!std::getline(ss, label, ',') || !std::getline(ss, extractor, ',') ||
            !std::getline(ss, family, ',')) {
            throw IoError("malformed feature row in " + path.string());
        }
        FeatureVector vec;
        vec.family = family_from_name(family);
        vec.extractor = extractor;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc()) throw IoError("bad numeric cell in " + path.string());
            vec.values.push_back(v);
        }
        if (dim == std::string::npos) dim = vec.dim();
        if (vec.dim() != dim) throw ContractError("load_features: mixed dims in " + path.string());
        rows.emplace_back(std::move(vec), std::move(label));
    }
    return rows;
}

}  // namespace blot
