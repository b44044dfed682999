#include "blot/texture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "blot/fft.hpp"

namespace blot {

namespace {

constexpr double kDegenerateEps = 1e-12;

// Statistics of the all-mass-at-one-cell matrix, also used when a GLCM
// spectrum collapses to zero.
Haralick5 degenerate_stats() { return {0.0, 1.0, 0.0, 1.0, 1.0}; }

void append_stats(std::vector<double>& out, const Haralick5& s) {
    out.push_back(s.contrast);
    out.push_back(s.homogeneity);
    out.push_back(s.dissimilarity);
    out.push_back(s.energy);
    out.push_back(s.correlation);
}

FeatureVector texture_features(const Residual& res, const TextureParams& params, bool fourier) {
    const QuantizedImage q = quantize(res, params.levels);
    FeatureVector out;
    out.family = fourier ? FeatureFamily::FftGlcm : FeatureFamily::Glcm;
    out.extractor = method_name(res.method);
    out.values.reserve(params.dim());
    for (Direction dir : {Direction::Horizontal, Direction::Vertical}) {
        for (int d : params.distances) {
            CoocMatrix m = glcm(q, d, dir);
            if (fourier) {
                m = cooc_spectrum(m);
                if (m.probs.empty()) {
                    append_stats(out.values, degenerate_stats());
                    continue;
                }
            }
            append_stats(out.values, haralick5(m));
        }
    }
    return out;
}

}  // namespace

QuantizedImage quantize(const Residual& res, int levels) {
    if (levels < 2 || levels > 256) throw ContractError("quantize: levels must be in [2, 256]");
    QuantizedImage q;
    q.width = res.width;
    q.height = res.height;
    q.levels = levels;
    q.bins.assign(res.size(), 0);

    const double n = static_cast<double>(res.size());
    const double mean = std::accumulate(res.data.begin(), res.data.end(), 0.0) / n;
    double var = 0.0;
    for (double v : res.data) var += (v - mean) * (v - mean);
    var /= n;
    const double sigma = std::sqrt(var);
    if (sigma <= 0.0) return q;  // constant residual: everything stays in bin 0

    const double lo = mean - 3.0 * sigma;
    const double span = 6.0 * sigma;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const double t = (std::clamp(res.data[i], lo, lo + span) - lo) / span;
        q.bins[i] = std::clamp(static_cast<int>(t * levels), 0, levels - 1);
    }
    return q;
}

CoocMatrix glcm(const QuantizedImage& q, int distance, Direction dir) {
    if (distance <= 0 || distance >= std::min(q.width, q.height)) {
        throw ContractError("glcm: distance must be positive and smaller than the image side");
    }
    CoocMatrix m;
    m.levels = q.levels;
    m.probs.assign(static_cast<std::size_t>(q.levels) * q.levels, 0.0);

    long pairs = 0;
    if (dir == Direction::Horizontal) {
        for (int r = 0; r < q.height; ++r) {
            for (int c = 0; c + distance < q.width; ++c) {
                m.at(q.at(r, c), q.at(r, c + distance)) += 1.0;
                ++pairs;
            }
        }
    } else {
        for (int r = 0; r + distance < q.height; ++r) {
            for (int c = 0; c < q.width; ++c) {
                m.at(q.at(r, c), q.at(r + distance, c)) += 1.0;
                ++pairs;
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(pairs);
    for (double& v : m.probs) v *= inv;
    return m;
}

Haralick5 haralick5(const CoocMatrix& m) {
    const int n = m.levels;
    Haralick5 s;
    double mu_i = 0.0, mu_j = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double p = m.at(i, j);
            if (p == 0.0) continue;
            const int d = i - j;
            s.contrast += p * d * d;
            s.homogeneity += p / (1.0 + d * d);
            s.dissimilarity += p * std::abs(d);
            s.energy += p * p;
            mu_i += p * i;
            mu_j += p * j;
        }
    }
    s.energy = std::sqrt(s.energy);

    double var_i = 0.0, var_j = 0.0, cov = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double p = m.at(i, j);
            if (p == 0.0) continue;
            var_i += p * (i - mu_i) * (i - mu_i);
            var_j += p * (j - mu_j) * (j - mu_j);
            cov += p * (i - mu_i) * (j - mu_j);
        }
    }
    const double denom = std::sqrt(var_i) * std::sqrt(var_j);
    s.correlation = denom < kDegenerateEps ? 1.0 : cov / denom;
    return s;
}

CoocMatrix cooc_spectrum(const CoocMatrix& m) {
    const int n = m.levels;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    const double mean = std::accumulate(m.probs.begin(), m.probs.end(), 0.0) / static_cast<double>(total);

    std::vector<std::complex<double>> buf(total);
    for (std::size_t i = 0; i < total; ++i) buf[i] = m.probs[i] - mean;
    fft::transform_2d(buf, n, n);

    CoocMatrix out;
    out.levels = n;
    out.probs.assign(total, 0.0);
    const int half = n / 2;
    double sum = 0.0;
    for (int r = 0; r < n; ++r) {
        const int sr = (r + half) % n;
        for (int c = 0; c < n; ++c) {
            const double v = std::abs(buf[static_cast<std::size_t>(r) * n + c]);
            out.at(sr, (c + half) % n) = v;
            sum += v;
        }
    }
    out.at(half, half) = 0.0;
    sum -= std::abs(buf[0]);
    if (sum <= kDegenerateEps) {
        out.probs.clear();  // constant GLCM: signal the degenerate case
        return out;
    }
    for (double& v : out.probs) v /= sum;
    return out;
}

FeatureVector glcm_vector_from_residual(const Residual& res, const TextureParams& params) {
    return texture_features(res, params, false);
}

FeatureVector fft_glcm_vector_from_residual(const Residual& res, const TextureParams& params) {
    return texture_features(res, params, true);
}

FeatureVector glcm_vector(const GrayImage& img, NoiseMethod method, const NoiseParams& np,
                          const TextureParams& params) {
    return glcm_vector_from_residual(extract(img, method, np), params);
}

FeatureVector fft_glcm_vector(const GrayImage& img, NoiseMethod method, const NoiseParams& np,
                              const TextureParams& params) {
    return fft_glcm_vector_from_residual(extract(img, method, np), params);
}

void write_glcm_csv(const CoocMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write GLCM CSV: " + path.string());
    char buf[64];
    for (int i = 0; i < m.levels; ++i) {
        for (int j = 0; j < m.levels; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
            out << buf << (j + 1 == m.levels ? "\n" : ",");
        }
    }
}

}  // namespace blot
