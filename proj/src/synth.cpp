#include "cfsep/synth.hpp"

#include "cfsep/error.hpp"
#include "cfsep/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace cfsep {
namespace {

constexpr double kNoiseSigma = 0.08;
constexpr double kFrameIntensity = 0.05;

using Rng = std::mt19937_64;

int draw(Rng& rng, IntRange r) { return std::uniform_int_distribution<int>(r.min, r.max)(rng); }

double draw(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void fill_noise(GrayImage& img, const Rect& r, double mean, Rng& rng) {
    std::normal_distribution<double> noise(mean, kNoiseSigma);
    for (int y = r.y; y < r.bottom(); ++y) {
        for (int x = r.x; x < r.right(); ++x) {
            img.at(x, y) = std::clamp(noise(rng), 0.0, 1.0);
        }
    }
}

void fill_const(GrayImage& img, const Rect& r, double v) {
    for (int y = r.y; y < r.bottom(); ++y) {
        for (int x = r.x; x < r.right(); ++x) {
            img.at(x, y) = v;
        }
    }
}

void draw_line(GrayImage& img, int x0, int y0, int x1, int y1, double v) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        img.at(x0, y0) = v;
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void fill_chart(GrayImage& img, const Rect& r, Rng& rng) {
    fill_const(img, r, 1.0);
    const int inset = std::max(4, static_cast<int>(0.08 * std::min(r.w, r.h)));
    const int left = r.x + inset;
    const int right = r.right() - inset;
    const int top = r.y + inset;
    const int base = r.bottom() - inset - 1;
    draw_line(img, left, top, left, base, 0.0);
    draw_line(img, left, base, right, base, 0.0);
    for (int x = left; x <= right; x += std::max(8, (right - left) / 8)) {
        draw_line(img, x, base, x, std::min(r.bottom() - 1, base + 3), 0.0);
    }
    const int series = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int s = 0; s < series; ++s) {
        const double ink = draw(rng, 0.0, 0.5);
        int px = left + 2;
        int py = std::uniform_int_distribution<int>(top, base - 2)(rng);
        while (px < right) {
            const int nx = std::min(right, px + std::uniform_int_distribution<int>(8, 20)(rng));
            const int step = std::uniform_int_distribution<int>(-(base - top) / 6, (base - top) / 6)(rng);
            const int ny = std::clamp(py + step, top, base - 2);
            draw_line(img, px, py, nx, ny, ink);
            px = nx;
            py = ny;
        }
    }
}

void draw_frame(GrayImage& img, const Rect& r, int t) {
    fill_const(img, {r.x, r.y, r.w, t}, kFrameIntensity);
    fill_const(img, {r.x, r.bottom() - t, r.w, t}, kFrameIntensity);
    fill_const(img, {r.x, r.y, t, r.h}, kFrameIntensity);
    fill_const(img, {r.right() - t, r.y, t, r.h}, kFrameIntensity);
}

bool is_chart(ContentKind c, Rng& rng) {
    switch (c) {
        case ContentKind::Chart:
            return true;
        case ContentKind::Noise:
            return false;
        case ContentKind::Mixed:
            break;
    }
    return std::bernoulli_distribution(0.5)(rng);
}

}  // namespace

void SynthSpec::validate() const {
    if (count < 1) throw DomainError("count must be >= 1");
    auto check = [](IntRange r, int lo, const char* name) {
        if (r.min < lo || r.max < r.min) throw DomainError(std::string("invalid range for ") + name);
    };
    check(rows, 1, "rows");
    check(cols, 1, "cols");
    check(band_width, 1, "band_width");
    check(outer_margin, 0, "outer_margin");
    check(panel_size, 16, "panel_size");
    if (separator_kinds.empty()) throw DomainError("separator_kinds must not be empty");
    const bool needs_grid = std::any_of(separator_kinds.begin(), separator_kinds.end(),
                                        [](SeparatorKind k) { return k != SeparatorKind::None; });
    if (needs_grid && rows.max * cols.max < 2) throw DomainError("grid ranges admit no compound figure");
    if (!(markup_noise >= 0.0 && markup_noise <= 1.0)) throw DomainError("markup_noise must lie in [0,1]");
    if (!(hard_single_fraction >= 0.0 && hard_single_fraction <= 1.0)) {
        throw DomainError("hard_single_fraction must lie in [0,1]");
    }
}

std::string to_string(SeparatorKind k) {
    switch (k) {
        case SeparatorKind::WhiteBand: return "white_band";
        case SeparatorKind::BorderEdge: return "border_edge";
        case SeparatorKind::Stitched: return "stitched";
        case SeparatorKind::None: return "none";
    }
    return "none";
}

SeparatorKind parse_separator_kind(const std::string& s) {
    for (auto k : {SeparatorKind::WhiteBand, SeparatorKind::BorderEdge, SeparatorKind::Stitched, SeparatorKind::None}) {
        if (to_string(k) == s) return k;
    }
    throw DomainError("unknown separator kind '" + s + "'");
}

std::string to_string(ContentKind k) {
    switch (k) {
        case ContentKind::Noise: return "noise";
        case ContentKind::Chart: return "chart";
        case ContentKind::Mixed: return "mixed";
    }
    return "mixed";
}

ContentKind parse_content_kind(const std::string& s) {
    for (auto k : {ContentKind::Noise, ContentKind::Chart, ContentKind::Mixed}) {
        if (to_string(k) == s) return k;
    }
    throw DomainError("unknown content kind '" + s + "'");
}

nlohmann::json to_json(const SynthSpec& s) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : s.separator_kinds) kinds.push_back(to_string(k));
    auto range = [](IntRange r) { return nlohmann::json::array({r.min, r.max}); };
    return {{"count", s.count},
            {"rows", range(s.rows)},
            {"cols", range(s.cols)},
            {"separator_kinds", kinds},
            {"band_width", range(s.band_width)},
            {"outer_margin", range(s.outer_margin)},
            {"panel_size", range(s.panel_size)},
            {"content", to_string(s.content)},
            {"markup_noise", s.markup_noise},
            {"hard_single_fraction", s.hard_single_fraction},
            {"seed", s.seed},
            {"id_prefix", s.id_prefix}};
}

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
    SynthSpec s;
    try {
        auto range = [&](const char* key, IntRange& r) {
            if (j.contains(key)) {
                r = {j.at(key).at(0).get<int>(), j.at(key).at(1).get<int>()};
            }
        };
        s.count = j.value("count", s.count);
        range("rows", s.rows);
        range("cols", s.cols);
        range("band_width", s.band_width);
        range("outer_margin", s.outer_margin);
        range("panel_size", s.panel_size);
        if (j.contains("separator_kinds")) {
            s.separator_kinds.clear();
            for (const auto& k : j.at("separator_kinds")) {
                s.separator_kinds.push_back(parse_separator_kind(k.get<std::string>()));
            }
        }
        if (j.contains("content")) s.content = parse_content_kind(j.at("content").get<std::string>());
        s.markup_noise = j.value("markup_noise", s.markup_noise);
        s.hard_single_fraction = j.value("hard_single_fraction", s.hard_single_fraction);
        s.seed = j.value("seed", s.seed);
        s.id_prefix = j.value("id_prefix", s.id_prefix);
        s.validate();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed synth spec: ") + e.what(), 0);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    return s;
}

SynthFigure synth_figure(const SynthSpec& spec, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    Rng rng(seq);

    SynthFigure fig;
    fig.kind = spec.separator_kinds[std::uniform_int_distribution<std::size_t>(0, spec.separator_kinds.size() - 1)(rng)];
    int rows = 1;
    int cols = 1;
    if (fig.kind != SeparatorKind::None) {
        do {
            rows = draw(rng, spec.rows);
            cols = draw(rng, spec.cols);
        } while (rows * cols < 2);
    }
    std::vector<int> widths(cols);
    std::vector<int> heights(rows);
    for (int& w : widths) w = draw(rng, spec.panel_size);
    for (int& h : heights) h = draw(rng, spec.panel_size);

    int gutter = 0;
    int margin = 0;
    int frame = 0;
    if (fig.kind == SeparatorKind::WhiteBand) {
        gutter = draw(rng, spec.band_width);
        margin = draw(rng, spec.outer_margin);
    } else if (fig.kind == SeparatorKind::BorderEdge) {
        frame = std::uniform_int_distribution<int>(1, 2)(rng);
    }
    int width = 2 * margin + (cols - 1) * gutter;
    int height = 2 * margin + (rows - 1) * gutter;
    for (int w : widths) width += w;
    for (int h : heights) height += h;

    fig.image = GrayImage(width, height, 1.0);
    fig.annotation.image_id = spec.id_prefix + [&] {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%05d", index);
        return std::string(buf);
    }();
    fig.annotation.is_compound = rows * cols > 1;
    fig.annotation.width = width;
    fig.annotation.height = height;

    int y = margin;
    for (int r = 0; r < rows; ++r) {
        int x = margin;
        for (int c = 0; c < cols; ++c) {
            const Rect panel{x, y, widths[c], heights[r]};
            const bool chart = is_chart(spec.content, rng);
            if (chart) {
                fill_chart(fig.image, panel, rng);
            } else {
                double mean = 0.0;
                switch (fig.kind) {
                    case SeparatorKind::WhiteBand: mean = draw(rng, 0.15, 0.4); break;
                    case SeparatorKind::BorderEdge: mean = draw(rng, 0.45, 0.85); break;
                    case SeparatorKind::Stitched:
                        mean = (r + c) % 2 == 0 ? draw(rng, 0.15, 0.35) : draw(rng, 0.6, 0.85);
                        break;
                    case SeparatorKind::None: mean = draw(rng, 0.15, 0.85); break;
                }
                fill_noise(fig.image, panel, mean, rng);
            }
            if (frame > 0) {
                draw_frame(fig.image, panel, frame);
            }
            fig.annotation.rects.push_back(panel);
            fig.labels.push_back(chart ? MetaLabel::Illustration : MetaLabel::NonIllustration);
            x += widths[c] + gutter;
        }
        y += heights[r] + gutter;
    }

    if (fig.kind == SeparatorKind::None && !fig.labels.empty() && fig.labels[0] == MetaLabel::NonIllustration &&
        std::bernoulli_distribution(spec.hard_single_fraction)(rng)) {
        // A single image whose right or lower part differs sharply in intensity.
        const bool vertical = std::bernoulli_distribution(0.5)(rng);
        const double cut = draw(rng, 0.3, 0.7);
        const double dark = draw(rng, 0.15, 0.35);
        const double light = draw(rng, 0.6, 0.85);
        const Rect a = vertical ? Rect{0, 0, static_cast<int>(cut * width), height}
                                : Rect{0, 0, width, static_cast<int>(cut * height)};
        const Rect b = vertical ? Rect{a.w, 0, width - a.w, height} : Rect{0, a.h, width, height - a.h};
        fill_noise(fig.image, a, dark, rng);
        fill_noise(fig.image, b, light, rng);
    }

    if (fig.kind == SeparatorKind::WhiteBand && spec.markup_noise > 0.0) {
        // Small label-like marks inside the gutters.
        std::bernoulli_distribution mark(spec.markup_noise);
        int gx = margin;
        for (int c = 0; c + 1 < cols; ++c) {
            gx += widths[c];
            if (mark(rng)) {
                const int my = std::uniform_int_distribution<int>(0, height - 6)(rng);
                fill_const(fig.image, {gx + gutter / 4, my, std::max(1, gutter / 2), 5}, 0.0);
            }
            gx += gutter;
        }
        int gy = margin;
        for (int r = 0; r + 1 < rows; ++r) {
            gy += heights[r];
            if (mark(rng)) {
                const int mx = std::uniform_int_distribution<int>(0, width - 6)(rng);
                fill_const(fig.image, {mx, gy + gutter / 4, 5, std::max(1, gutter / 2)}, 0.0);
            }
            gy += gutter;
        }
    }
    return fig;
}

std::vector<SynthFigure> synth_generate(const SynthSpec& spec) {
    spec.validate();
    std::vector<SynthFigure> out;
    out.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        out.push_back(synth_figure(spec, i));
    }
    return out;
}

Corpus write_synth_corpus(const std::vector<SynthFigure>& figures, const std::filesystem::path& dir) {
    Corpus corpus;
    corpus.root = dir;
    std::filesystem::create_directories(dir / "images");
    for (const auto& f : figures) {
        CorpusEntry e;
        e.image_id = f.annotation.image_id;
        e.image_path = std::filesystem::path("images") / (e.image_id + ".png");
        e.annotation = f.annotation;
        e.labels = f.labels;
        write_png(f.image, corpus.image_file(e));
        corpus.entries.push_back(std::move(e));
    }
    save_corpus(corpus);
    return corpus;
}

}  // namespace cfsep
