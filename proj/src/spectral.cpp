#include "blot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "blot/fft.hpp"

namespace blot {

namespace {

// Magnitudes of the centered DFT of a zero-meaned plane.
Spectrum spectrum_of_plane(const std::vector<double>& plane, int n) {
    const std::size_t total = static_cast<std::size_t>(n) * n;
    const double mean = std::accumulate(plane.begin(), plane.end(), 0.0) / static_cast<double>(total);

    std::vector<std::complex<double>> buf(total);
    for (std::size_t i = 0; i < total; ++i) buf[i] = plane[i] - mean;
    fft::transform_2d(buf, n, n);

    Spectrum out;
    out.size = n;
    out.mags.assign(total, 0.0);
    const int half = n / 2;
    for (int r = 0; r < n; ++r) {
        const int sr = (r + half) % n;  // bin r lands at shifted row sr
        for (int c = 0; c < n; ++c) {
            out.at(sr, (c + half) % n) = std::abs(buf[static_cast<std::size_t>(r) * n + c]);
        }
    }
    out.at(half, half) = 0.0;  // zero-mean input: DC is exactly 0
    return out;
}

int band_bin(double f, int n) {
    const int half = n / 2;
    int b = static_cast<int>(std::llround(f * n)) + half;
    b %= n;
    if (b < 0) b += n;
    return b;
}

double parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0.0) throw ContractError("band fraction with zero denominator: " + s);
    return num / den;
}

}  // namespace

const BandSet& default_band_set() {
    static const BandSet bands = [] {
        const double vals[] = {0.0, 0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0, 0.5, -0.5};
        BandSet out;
        for (double fy : vals) {
            for (double fx : vals) {
                if (fx == 0.0 && fy == 0.0) continue;
                Band b{fx, fy};
                // canonical representative under conjugate symmetry
                if (b.fy < 0.0 || (b.fy == 0.0 && b.fx < 0.0)) b = {-b.fx, -b.fy};
                if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
            }
        }
        return out;
    }();
    return bands;
}

std::string band_name(const Band& b) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "f(%.4g,%.4g)", b.fx, b.fy);
    return buf;
}

BandSet parse_band_set(const std::string& text) {
    BandSet out;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        if (pair.empty()) continue;
        const auto comma = pair.find(',');
        if (comma == std::string::npos) throw ContractError("band must be 'fx,fy': " + pair);
        Band b{parse_fraction(pair.substr(0, comma)), parse_fraction(pair.substr(comma + 1))};
        if (b.fx < -0.5 || b.fx > 0.5 || b.fy < -0.5 || b.fy > 0.5) {
            throw ContractError("band outside [-1/2, 1/2]: " + pair);
        }
        if (b.fx == 0.0 && b.fy == 0.0) throw ContractError("band (0,0) is excluded");
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
    if (out.empty()) throw ContractError("empty band set");
    return out;
}

Spectrum fft_magnitude(const Residual& res) {
    if (res.width != res.height || res.width == 0) {
        throw ContractError("fft_magnitude: residual must be square and nonempty");
    }
    return spectrum_of_plane(res.data, res.width);
}

Spectrum patch_average_spectrum(const Residual& res, int patch) {
    if (res.width != res.height || res.width == 0) {
        throw ContractError("patch_average_spectrum: residual must be square and nonempty");
    }
    if (patch <= 0 || res.width % patch != 0) {
        std::string valid;
        for (int d = 1; d <= res.width; ++d) {
            if (res.width % d == 0) valid += (valid.empty() ? "" : ",") + std::to_string(d);
        }
        throw ContractError("patch_average_spectrum: patch must divide side " +
                            std::to_string(res.width) + " (valid: " + valid + ")");
    }
    const int tiles = res.width / patch;
    Spectrum avg;
    avg.size = patch;
    avg.mags.assign(static_cast<std::size_t>(patch) * patch, 0.0);
    std::vector<double> tile(static_cast<std::size_t>(patch) * patch);
    for (int tr = 0; tr < tiles; ++tr) {
        for (int tc = 0; tc < tiles; ++tc) {
            for (int r = 0; r < patch; ++r) {
                for (int c = 0; c < patch; ++c) {
                    tile[static_cast<std::size_t>(r) * patch + c] = res.at(tr * patch + r, tc * patch + c);
                }
            }
            const Spectrum s = spectrum_of_plane(tile, patch);
            for (std::size_t i = 0; i < avg.mags.size(); ++i) avg.mags[i] += s.mags[i];
        }
    }
    const double inv = 1.0 / static_cast<double>(tiles * tiles);
    for (double& v : avg.mags) v *= inv;
    return avg;
}

FeatureVector band_features(const Spectrum& spec, const BandSet& bands, FeatureFamily family,
                            const std::string& extractor_tag) {
    FeatureVector out;
    out.family = family;
    out.extractor = extractor_tag;
    out.values.assign(bands.size(), 0.0);

    std::vector<double> nonzero;
    nonzero.reserve(spec.mags.size());
    for (double v : spec.mags) {
        if (v > 0.0) nonzero.push_back(v);
    }
    if (nonzero.empty()) return out;  // degenerate all-zero spectrum

    const std::size_t mid = nonzero.size() / 2;
    std::nth_element(nonzero.begin(), nonzero.begin() + mid, nonzero.end());
    double median = nonzero[mid];
    if (nonzero.size() % 2 == 0) {
        const auto lo = std::max_element(nonzero.begin(), nonzero.begin() + mid);
        median = 0.5 * (median + *lo);
    }

    const int n = spec.size;
    for (std::size_t k = 0; k < bands.size(); ++k) {
        const int bc = band_bin(bands[k].fx, n);
        const int br = band_bin(bands[k].fy, n);
        double peak = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int r = (br + dr + n) % n;
                const int c = (bc + dc + n) % n;
                peak = std::max(peak, spec.at(r, c));
            }
        }
        out.values[k] = peak / (median + 1e-12);
    }
    return out;
}

FeatureVector fft_peaks(const GrayImage& img, NoiseMethod method, const NoiseParams& np,
                        const BandSet& bands) {
    const Residual res = extract(img, method, np);
    return band_features(fft_magnitude(res), bands, FeatureFamily::FftPeaks, method_name(method));
}

FeatureVector patch_fft_peaks(const GrayImage& img, NoiseMethod method, int patch,
                              const NoiseParams& np, const BandSet& bands) {
    const Residual res = extract(img, method, np);
    return band_features(patch_average_spectrum(res, patch), bands, FeatureFamily::PatchFftPeaks,
                         method_name(method));
}

void write_spectrum_pgm(const Spectrum& spec, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write spectrum PGM: " + path.string());
    const double peak = *std::max_element(spec.mags.begin(), spec.mags.end());
    const double scale = peak > 0.0 ? 255.0 / std::log1p(peak) : 0.0;
    out << "P5\n" << spec.size << " " << spec.size << "\n255\n";
    for (double v : spec.mags) {
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::log1p(v) * scale))));
    }
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum CSV: " + path.string());
    char buf[64];
    for (int r = 0; r < spec.size; ++r) {
        for (int c = 0; c < spec.size; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", spec.at(r, c));
            out << buf << (c + 1 == spec.size ? "\n" : ",");
        }
    }
}

}  // namespace blot
