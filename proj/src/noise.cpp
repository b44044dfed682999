#include "blot/noise.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace blot {

namespace {

constexpr double kKernelSumTol = 1e-9;

int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

double image_mean(const GrayImage& img) {
    const double s = std::accumulate(img.data.begin(), img.data.end(), 0.0);
    return s / static_cast<double>(img.data.size());
}

// Residual = img - conv for predictor kernels, shared by the named kernels
// and the subtractive cross-kernel variant.
Residual subtract_conv(const GrayImage& img, const Kernel& k, NoiseMethod tag) {
    Residual conv = conv2d_reflect(img, k);
    Residual out(img.width, img.height, tag);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = img.data[i] - conv.data[i];
    return out;
}

Residual gaussian_residual(const GrayImage& img) {
    // Separable two-pass filter; equals the 9x9 kernel within rounding.
    const std::vector<double> g = gaussian_kernel_1d(1.0, 4);
    const int radius = 4;
    const int w = img.width, h = img.height;
    std::vector<double> tmp(img.size());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                acc += g[j + radius] * img.at(r, reflect_index(c + j, w));
            }
            tmp[static_cast<std::size_t>(r) * w + c] = acc;
        }
    }
    Residual out(w, h, NoiseMethod::Gaussian);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                acc += g[j + radius] * tmp[static_cast<std::size_t>(reflect_index(r + j, h)) * w + c];
            }
            out.at(r, c) = img.at(r, c) - acc;
        }
    }
    return out;
}

// Gaussian elimination with partial pivoting; returns false when the pivot
// collapses (singular system).
bool solve_linear(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) < 1e-14) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * x[c];
        x[r] = acc / a[r * n + r];
    }
    return true;
}

}  // namespace

std::string method_name(NoiseMethod m) {
    switch (m) {
        case NoiseMethod::MandelliT: return "mandelli-t";
        case NoiseMethod::BammeyC: return "bammey-c";
        case NoiseMethod::Gaussian: return "gaussian";
        case NoiseMethod::Mean: return "mean";
        case NoiseMethod::KirchnerK: return "kirchner-k";
        case NoiseMethod::PMap: return "pmap";
        case NoiseMethod::NonLocalMeans: return "nlmeans";
        case NoiseMethod::NoExtraction: return "none";
    }
    throw ContractError("unknown noise method");
}

NoiseMethod method_from_name(const std::string& name) {
    for (NoiseMethod m : all_noise_methods()) {
        if (method_name(m) == name) return m;
    }
    throw ContractError("unknown noise method: " + name);
}

std::vector<NoiseMethod> all_noise_methods() {
    return {NoiseMethod::MandelliT, NoiseMethod::BammeyC,     NoiseMethod::Gaussian,
            NoiseMethod::Mean,      NoiseMethod::KirchnerK,   NoiseMethod::PMap,
            NoiseMethod::NonLocalMeans, NoiseMethod::NoExtraction};
}

double Kernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

Kernel kernel_t() {
    return {3, 3, {0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0}};
}

Kernel kernel_c() {
    return {2, 2, {1.0, -1.0, -1.0, 1.0}};
}

Kernel kernel_m() {
    const double e = 1.0 / 8.0;
    return {3, 3, {e, e, e, e, 0.0, e, e, e, e}};
}

Kernel kernel_k() {
    return {3, 3, {-0.25, 0.50, -0.25, 0.50, 0.0, 0.50, -0.25, 0.50, -0.25}};
}

std::vector<double> gaussian_kernel_1d(double sigma, int radius) {
    std::vector<double> g(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        g[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        total += g[i + radius];
    }
    for (double& v : g) v /= total;
    return g;
}

Kernel gaussian_kernel(double sigma, int radius) {
    const std::vector<double> g = gaussian_kernel_1d(sigma, radius);
    const int n = 2 * radius + 1;
    Kernel k{n, n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) k.weights[static_cast<std::size_t>(r) * n + c] = g[r] * g[c];
    }
    const double s = k.sum();
    for (double& v : k.weights) v /= s;
    return k;
}

Residual conv2d_reflect(const GrayImage& img, const Kernel& k) {
    if (img.empty()) throw ContractError("conv2d_reflect: empty image");
    const int ar = (k.rows - 1) / 2;
    const int ac = (k.cols - 1) / 2;
    Residual out(img.width, img.height);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            double acc = 0.0;
            for (int i = 0; i < k.rows; ++i) {
                const int rr = reflect_index(r + i - ar, img.height);
                for (int j = 0; j < k.cols; ++j) {
                    acc += k.at(i, j) * img.at(rr, reflect_index(c + j - ac, img.width));
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

Residual predictor_residual(const GrayImage& img, const Kernel& k) {
    if (std::abs(k.sum() - 1.0) > kKernelSumTol) {
        throw ContractError("predictor_residual: kernel weights must sum to 1");
    }
    return subtract_conv(img, k, NoiseMethod::MandelliT);
}

Residual highpass_residual(const GrayImage& img, const Kernel& k) {
    if (std::abs(k.sum()) > kKernelSumTol) {
        throw ContractError("highpass_residual: kernel weights must sum to 0");
    }
    Residual out = conv2d_reflect(img, k);
    out.method = NoiseMethod::BammeyC;
    return out;
}

Residual pmap_residual(const GrayImage& img, const PMapParams& p) {
    if (p.radius != 1 && p.radius != 2) throw ContractError("pmap_residual: radius must be 1 or 2");
    if (p.max_iters < 1) throw ContractError("pmap_residual: max_iters must be >= 1");

    const int w = img.width, h = img.height;
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -p.radius; dy <= p.radius; ++dy) {
        for (int dx = -p.radius; dx <= p.radius; ++dx) {
            if (dy != 0 || dx != 0) offsets.emplace_back(dy, dx);
        }
    }
    const int m = static_cast<int>(offsets.size());
    const std::size_t n = img.size();

    // Neighbor planes, gathered once with reflected borders.
    std::vector<std::vector<double>> nb(m, std::vector<double>(n));
    for (int t = 0; t < m; ++t) {
        const auto [dy, dx] = offsets[t];
        for (int r = 0; r < h; ++r) {
            const int rr = reflect_index(r + dy, h);
            for (int c = 0; c < w; ++c) {
                nb[t][static_cast<std::size_t>(r) * w + c] = img.at(rr, reflect_index(c + dx, w));
            }
        }
    }

    std::vector<double> weights(m, 1.0 / m);
    double sigma = 0.0075;  // 0.0075 x dynamic range; luminance range is 1
    std::vector<double> post(n, 0.5);
    std::vector<double> resid(n, 0.0);
    const double uniform_density = 1.0;  // outlier model: uniform over the value range
    bool warned = false;

    for (int iter = 0; iter < p.max_iters; ++iter) {
        // E-step: posterior that each pixel follows the linear model.
        const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
        const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
        for (std::size_t i = 0; i < n; ++i) {
            double pred = 0.0;
            for (int t = 0; t < m; ++t) pred += weights[t] * nb[t][i];
            const double r = img.data[i] - pred;
            resid[i] = r;
            const double g = norm * std::exp(-r * r * inv2s2);
            post[i] = g / (g + uniform_density);
        }

        // M-step: weighted least squares for the weights.
        std::vector<double> ata(static_cast<std::size_t>(m) * m, 0.0);
        std::vector<double> atb(m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double pw = post[i];
            for (int a = 0; a < m; ++a) {
                const double va = pw * nb[a][i];
                atb[a] += va * img.data[i];
                for (int b = a; b < m; ++b) ata[static_cast<std::size_t>(a) * m + b] += va * nb[b][i];
            }
        }
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < a; ++b) {
                ata[static_cast<std::size_t>(a) * m + b] = ata[static_cast<std::size_t>(b) * m + a];
            }
        }
        std::vector<double> next;
        if (!solve_linear(ata, atb, m, next)) {
            if (!warned) {
                std::cerr << "pmap_residual: singular system, using ridge fallback\n";
                warned = true;
            }
            for (int a = 0; a < m; ++a) ata[static_cast<std::size_t>(a) * m + a] += 1e-6;
            if (!solve_linear(ata, atb, m, next)) next = weights;  // keep previous weights
        }

        // Residual-model variance under the new weights.
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pred = 0.0;
            for (int t = 0; t < m; ++t) pred += next[t] * nb[t][i];
            const double r = img.data[i] - pred;
            num += post[i] * r * r;
            den += post[i];
        }
        sigma = std::sqrt(std::max(num / std::max(den, 1e-12), 1e-12));

        double delta = 0.0;
        for (int t = 0; t < m; ++t) delta = std::max(delta, std::abs(next[t] - weights[t]));
        weights = std::move(next);
        if (delta < p.tol) break;
    }

    // Final E-step under the converged weights.
    Residual out(w, h, NoiseMethod::PMap);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (int t = 0; t < m; ++t) pred += weights[t] * nb[t][i];
        const double r = img.data[i] - pred;
        const double g = norm * std::exp(-r * r * inv2s2);
        out.data[i] = g / (g + uniform_density);
    }
    return out;
}

Residual nlmeans_residual(const GrayImage& img, const NlmParams& p) {
    if (p.patch < 3 || p.patch % 2 == 0) throw ContractError("nlmeans_residual: patch must be odd >= 3");
    if (p.window <= p.patch || p.window % 2 == 0) {
        throw ContractError("nlmeans_residual: window must be odd and larger than patch");
    }
    if (p.strength <= 0.0) throw ContractError("nlmeans_residual: strength must be positive");

    const int w = img.width, h = img.height;
    const int ph = p.patch / 2;
    const int wh = p.window / 2;
    const int pad = ph + wh;
    const int hp = h + 2 * pad, wp = w + 2 * pad;

    std::vector<double> padded(static_cast<std::size_t>(hp) * wp);
    for (int r = 0; r < hp; ++r) {
        const int sr = reflect_index(r - pad, h);
        for (int c = 0; c < wp; ++c) {
            padded[static_cast<std::size_t>(r) * wp + c] = img.at(sr, reflect_index(c - pad, w));
        }
    }

    // diff plane covers every patch position around the original pixels
    const int dh = h + 2 * ph, dw = w + 2 * ph;
    const int base = pad - ph;  // padded coordinate of diff origin
    std::vector<double> diff(static_cast<std::size_t>(dh) * dw);
    std::vector<double> integral(static_cast<std::size_t>(dh + 1) * (dw + 1));
    std::vector<double> num(img.size(), 0.0), den(img.size(), 0.0);

    const double inv_h2 = 1.0 / (p.strength * p.strength);
    const double noise_term = 2.0 * p.noise_sigma * p.noise_sigma;
    const double patch_area = static_cast<double>(p.patch) * p.patch;

    for (int dy = -wh; dy <= wh; ++dy) {
        for (int dx = -wh; dx <= wh; ++dx) {
            for (int r = 0; r < dh; ++r) {
                const std::size_t row0 = static_cast<std::size_t>(r + base) * wp + base;
                const std::size_t row1 = static_cast<std::size_t>(r + base + dy) * wp + base + dx;
                for (int c = 0; c < dw; ++c) {
                    const double d = padded[row0 + c] - padded[row1 + c];
                    diff[static_cast<std::size_t>(r) * dw + c] = d * d;
                }
            }
            for (int r = 0; r <= dh; ++r) integral[static_cast<std::size_t>(r) * (dw + 1)] = 0.0;
            std::fill(integral.begin(), integral.begin() + dw + 1, 0.0);
            for (int r = 0; r < dh; ++r) {
                double rowsum = 0.0;
                for (int c = 0; c < dw; ++c) {
                    rowsum += diff[static_cast<std::size_t>(r) * dw + c];
                    integral[static_cast<std::size_t>(r + 1) * (dw + 1) + c + 1] =
                        integral[static_cast<std::size_t>(r) * (dw + 1) + c + 1] + rowsum;
                }
            }
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    const std::size_t i00 = static_cast<std::size_t>(r) * (dw + 1) + c;
                    const std::size_t i11 = static_cast<std::size_t>(r + p.patch) * (dw + 1) + c + p.patch;
                    const std::size_t i01 = static_cast<std::size_t>(r) * (dw + 1) + c + p.patch;
                    const std::size_t i10 = static_cast<std::size_t>(r + p.patch) * (dw + 1) + c;
                    const double d2 = (integral[i11] - integral[i01] - integral[i10] + integral[i00]) /
                                      patch_area;
                    const double wgt = std::exp(-std::max(d2 - noise_term, 0.0) * inv_h2);
                    const std::size_t pix = static_cast<std::size_t>(r) * w + c;
                    num[pix] += wgt * padded[static_cast<std::size_t>(r + pad + dy) * wp + c + pad + dx];
                    den[pix] += wgt;
                }
            }
        }
    }

    Residual out(w, h, NoiseMethod::NonLocalMeans);
    for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = img.data[i] - num[i] / den[i];
    return out;
}

Residual extract(const GrayImage& img, NoiseMethod m, const NoiseParams& p) {
    switch (m) {
        case NoiseMethod::MandelliT: {
            Residual r = predictor_residual(img, kernel_t());
            r.method = m;
            return r;
        }
        case NoiseMethod::BammeyC: {
            if (p.bammey_subtract) return subtract_conv(img, kernel_c(), m);
            return highpass_residual(img, kernel_c());
        }
        case NoiseMethod::Gaussian:
            return gaussian_residual(img);
        case NoiseMethod::Mean: {
            Residual r = predictor_residual(img, kernel_m());
            r.method = m;
            return r;
        }
        case NoiseMethod::KirchnerK: {
            Residual r = predictor_residual(img, kernel_k());
            r.method = m;
            return r;
        }
        case NoiseMethod::PMap:
            return pmap_residual(img, p.pmap);
        case NoiseMethod::NonLocalMeans:
            return nlmeans_residual(img, p.nlm);
        case NoiseMethod::NoExtraction: {
            Residual r(img.width, img.height, m);
            const double mu = image_mean(img);
            for (std::size_t i = 0; i < img.size(); ++i) r.data[i] = img.data[i] - mu;
            return r;
        }
    }
    throw ContractError("extract: unknown noise method");
}

}  // namespace blot
