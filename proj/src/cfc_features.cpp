#include "cfsep/cfc_features.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace cfsep {

FeatureSetSpec FeatureSetSpec::parse(const std::string& code, int k) {
    if (code.size() != 3 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= '0' && c <= '6'; })) {
        throw DomainError("feature set must be three digits 0-6, got '" + code + "'");
    }
    FeatureSetSpec s{code[0] - '0', code[1] - '0', code[2] - '0', k};
    s.validate();
    return s;
}

std::string FeatureSetSpec::code() const {
    return std::to_string(mean_profile) + std::to_string(variance_profile) + std::to_string(hough_profile);
}

void FeatureSetSpec::validate() const {
    for (int d : {mean_profile, variance_profile, hough_profile}) {
        if (d < 0 || d > 6) {
            throw DomainError("profile id out of range 0..6");
        }
    }
    if (mean_profile == 0 && variance_profile == 0 && hough_profile == 0) {
        throw DomainError("feature set 000 is empty");
    }
    if (k < 1) {
        throw DomainError("k must be positive");
    }
}

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(what) + " value outside [0,1]");
    }
}

void check_bins(int n, const char* what) {
    if (n < 1) {
        throw DomainError(std::string(what) + " bin count must be positive");
    }
}

int quantize_lower_bound(double v, int n) {
    for (int i = 1; i < n; ++i) {
        if (1.0 - std::ldexp(1.0, i - n) <= v) {
            return i;
        }
    }
    return n;
}

}  // namespace

int quantize_mean(double v, int p) {
    check_unit(v, "mean");
    check_bins(p, "mean");
    return quantize_lower_bound(v, p);
}

int quantize_variance(double v, int q) {
    check_unit(v, "variance");
    check_bins(q, "variance");
    for (int i = 1; i < q; ++i) {
        if (v <= std::ldexp(1.0, i - q)) {
            return i;
        }
    }
    return q;
}

int quantize_hough(double v, int h) {
    check_unit(v, "hough");
    check_bins(h, "hough");
    return quantize_lower_bound(v, h);
}

std::vector<int> spatial_bins(int n, int k) {
    if (k < 1) {
        throw DomainError("k must be positive");
    }
    if (n < k) {
        throw InputTooSmall("cannot split " + std::to_string(n) + " positions into " + std::to_string(k) + " bins");
    }
    std::vector<int> lengths(k, n / k);
    for (int i = 0; i < n % k; ++i) {
        ++lengths[i];
    }
    return lengths;
}

std::vector<double> profile(const std::vector<double>& vec, int method, int k, int bins) {
    if (method < 1 || method > 6) {
        throw DomainError("profile method must be in 1..6");
    }
    const int n = static_cast<int>(vec.size());

    if (method == 6) {
        if (n < k) {
            throw InputTooSmall("projection shorter than k");
        }
        std::vector<double> out(k);
        for (int f = 0; f < k; ++f) {
            std::complex<double> acc{0.0, 0.0};
            for (int t = 0; t < n; ++t) {
                const double phase = -2.0 * std::numbers::pi * static_cast<double>(f) * t / n;
                acc += vec[t] * std::polar(1.0, phase);
            }
            out[f] = std::min(1.0, std::abs(acc) / n);
        }
        return out;
    }

    check_bins(bins, "profile");
    for (double v : vec) {
        if (v < 1.0 || v > bins || v != std::floor(v)) {
            throw DomainError("quantized value outside 1.." + std::to_string(bins));
        }
    }
    const std::vector<int> lengths = spatial_bins(n, k);
    std::vector<double> out;
    out.reserve(method == 1 ? static_cast<std::size_t>(k) * bins : k);
    std::vector<int> hist(bins + 1);
    int start = 0;
    for (int len : lengths) {
        std::fill(hist.begin(), hist.end(), 0);
        double sum = 0.0;
        int maxv = 0;
        for (int t = start; t < start + len; ++t) {
            const int v = static_cast<int>(vec[t]);
            ++hist[v];
            sum += v;
            maxv = std::max(maxv, v);
        }
        switch (method) {
            case 1:
                for (int b = 1; b <= bins; ++b) {
                    out.push_back(static_cast<double>(hist[b]) / len);
                }
                break;
            case 2: {
                int mode = 1;
                for (int b = 2; b <= bins; ++b) {
                    if (hist[b] > hist[mode]) {
                        mode = b;
                    }
                }
                out.push_back(static_cast<double>(mode) / bins);
                break;
            }
            case 3:
                out.push_back(static_cast<double>(hist[bins]) / len);
                break;
            case 4:
                out.push_back(static_cast<double>(maxv) / bins);
                break;
            case 5:
                out.push_back(sum / len / bins);
                break;
        }
        start += len;
    }
    return out;
}

int feature_dimensionality(const FeatureSetSpec& spec, const QuantizationParams& qp) {
    spec.validate();
    auto part = [&](int method, int bins) { return method == 0 ? 0 : (method == 1 ? spec.k * bins : spec.k); };
    return 2 * (part(spec.mean_profile, qp.p) + part(spec.variance_profile, qp.q) + part(spec.hough_profile, qp.h));
}

namespace {

// Quantized projections are re-indexed so that the largest index is the
// separator-like end for mean (bright) and Hough (strong line) values.
// Variance keeps its natural order.
void append_direction(const GrayImage& img, Direction dir, const FeatureSetSpec& spec,
                      const QuantizationParams& qp, FeatureVector& out) {
    auto emit = [&](int method, const std::vector<double>& raw, int bins, auto quantize_oriented) {
        if (method == 0) {
            return;
        }
        std::vector<double> input;
        if (method == 6) {
            input = raw;
        } else {
            input.resize(raw.size());
            std::transform(raw.begin(), raw.end(), input.begin(), quantize_oriented);
        }
        const auto prof = profile(input, method, spec.k, bins);
        out.insert(out.end(), prof.begin(), prof.end());
    };

    if (spec.mean_profile != 0) {
        emit(spec.mean_profile, line_projection(img, dir, LineStat::Mean), qp.p,
             [&](double v) { return static_cast<double>(qp.p + 1 - quantize_mean(v, qp.p)); });
    }
    if (spec.variance_profile != 0) {
        emit(spec.variance_profile, line_projection(img, dir, LineStat::Variance), qp.q,
             [&](double v) { return static_cast<double>(quantize_variance(v, qp.q)); });
    }
    if (spec.hough_profile != 0) {
        const auto counts = hough_1d(sobel_edges(img, dir, kCfcSobelThreshold), dir);
        const double len = img.line_length(dir);
        std::vector<double> norm(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            norm[i] = counts[i] / len;
        }
        emit(spec.hough_profile, norm, qp.h,
             [&](double v) { return static_cast<double>(qp.h + 1 - quantize_hough(v, qp.h)); });
    }
}

}  // namespace

FeatureVector extract_cfc_features(const GrayImage& img, const FeatureSetSpec& spec, const QuantizationParams& qp) {
    spec.validate();
    check_bins(qp.p, "mean");
    check_bins(qp.q, "variance");
    check_bins(qp.h, "hough");
    if (img.width() < spec.k || img.height() < spec.k) {
        throw InputTooSmall("image smaller than k=" + std::to_string(spec.k) + " spatial bins");
    }
    FeatureVector out;
    out.reserve(feature_dimensionality(spec, qp));
    append_direction(img, Direction::Horizontal, spec, qp, out);
    append_direction(img, Direction::Vertical, spec, qp, out);
    return out;
}

}  // namespace cfsep
