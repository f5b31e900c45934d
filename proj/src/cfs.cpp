#include "cfsep/cfs.hpp"

#include "cfsep/band_sep.hpp"
#include "cfsep/edge_sep.hpp"
#include "cfsep/error.hpp"
#include "cfsep/image_io.hpp"

#include <algorithm>

namespace cfsep {
namespace {

bool homogeneous_row(const GrayImage& img, int y, int x0, int x1) {
    const auto row = img.row(y);
    const auto [lo, hi] = std::minmax_element(row.begin() + x0, row.begin() + x1);
    return *hi - *lo <= kBorderTolerance;
}

bool homogeneous_col(const GrayImage& img, int x, int y0, int y1) {
    double lo = img.at(x, y0);
    double hi = lo;
    for (int y = y0 + 1; y < y1; ++y) {
        const double v = img.at(x, y);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo <= kBorderTolerance;
}

class Engine {
public:
    Engine(const GrayImage& img, const CfsParams& params, const IlluModel* illu, Variant variant)
        : img_(img), params_(params), illu_(illu), variant_(variant) {}

    void run(const Rect& region, int depth, Routing routing, std::vector<Rect>& out) {
        if (variant_ == Variant::ClassifyPerSubfigure && illu_ != nullptr && depth > 0) {
            routing = route(*illu_, crop(img_, region));
        }
        const auto bb = remove_border_bands(img_, region);
        if (!bb) {
            return;
        }
        const double min_area = params_.elim_area * static_cast<double>(full_rect(img_).area());
        if (static_cast<double>(bb->area()) < min_area) {
            return;
        }
        depth_reached_ = std::max(depth_reached_, depth);
        const int max_depth = routing == Routing::BandBased ? params_.band_maxdepth : params_.edge_maxdepth;
        if (depth >= max_depth) {
            out.push_back(*bb);
            return;
        }
        const GrayImage sub = crop(img_, *bb);
        std::vector<SeparatorLine> v_lines;
        std::vector<SeparatorLine> h_lines;
        if (bb->w >= params_.mindim) {
            v_lines = detect_separators(sub, Direction::Vertical, depth, routing, params_);
        }
        if (bb->h >= params_.mindim) {
            h_lines = detect_separators(sub, Direction::Horizontal, depth, routing, params_);
        }
        if (v_lines.empty() && h_lines.empty()) {
            out.push_back(*bb);
            return;
        }
        const Direction dir = decide_direction(v_lines, h_lines, *bb);
        for (const Rect& part : split(*bb, dir == Direction::Vertical ? v_lines : h_lines, dir)) {
            run(part, depth + 1, routing, out);
        }
    }

    int depth_reached() const { return depth_reached_; }

private:
    const GrayImage& img_;
    const CfsParams& params_;
    const IlluModel* illu_;
    Variant variant_;
    int depth_reached_ = 0;
};

SeparationResult run_engine(const GrayImage& img, const CfsParams& params, const IlluModel* illu, Variant variant,
                            Routing routing) {
    SeparationResult result;
    result.routing = routing;
    if (img.empty()) {
        return result;
    }
    Engine engine(img, params, illu, variant);
    engine.run(full_rect(img), 0, routing, result.rects);
    result.depth_reached = engine.depth_reached();
    if (result.rects.empty()) {
        result.rects.push_back(full_rect(img));
    }
    return result;
}

}  // namespace

std::optional<Rect> remove_border_bands(const GrayImage& img) { return remove_border_bands(img, full_rect(img)); }

std::optional<Rect> remove_border_bands(const GrayImage& img, const Rect& region) {
    int x0 = region.x;
    int y0 = region.y;
    int x1 = region.right();
    int y1 = region.bottom();
    bool changed = true;
    while (changed && x0 < x1 && y0 < y1) {
        changed = false;
        while (y0 < y1 && homogeneous_row(img, y0, x0, x1)) {
            ++y0;
            changed = true;
        }
        while (y0 < y1 && homogeneous_row(img, y1 - 1, x0, x1)) {
            --y1;
            changed = true;
        }
        while (y0 < y1 && x0 < x1 && homogeneous_col(img, x0, y0, y1)) {
            ++x0;
            changed = true;
        }
        while (y0 < y1 && x0 < x1 && homogeneous_col(img, x1 - 1, y0, y1)) {
            --x1;
            changed = true;
        }
    }
    if (x0 >= x1 || y0 >= y1) {
        return std::nullopt;
    }
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

Direction decide_direction(const std::vector<SeparatorLine>& v_lines, const std::vector<SeparatorLine>& h_lines,
                           const Rect& bounds) {
    if (v_lines.empty() && h_lines.empty()) {
        throw NoSeparators("no separator lines in either direction");
    }
    if (h_lines.empty()) {
        return Direction::Vertical;
    }
    if (v_lines.empty()) {
        return Direction::Horizontal;
    }
    auto positions = [](const std::vector<SeparatorLine>& lines) {
        std::vector<double> out;
        for (const auto& l : lines) {
            out.push_back(l.position);
        }
        return out;
    };
    const double v_var = normalized_gap_variance(positions(v_lines), bounds.w);
    const double h_var = normalized_gap_variance(positions(h_lines), bounds.h);
    return h_var < v_var ? Direction::Horizontal : Direction::Vertical;
}

std::vector<Rect> split(const Rect& bounds, const std::vector<SeparatorLine>& lines, Direction dir) {
    const int extent = dir == Direction::Vertical ? bounds.w : bounds.h;
    std::vector<Rect> out;
    int prev = 0;
    for (const SeparatorLine& l : lines) {
        if (l.direction != dir) {
            throw DomainError("separator line direction does not match split direction");
        }
        if (l.position <= prev || l.position >= extent) {
            throw DomainError("separator line outside bounds or out of order");
        }
        if (dir == Direction::Vertical) {
            out.push_back({bounds.x + prev, bounds.y, l.position - prev, bounds.h});
        } else {
            out.push_back({bounds.x, bounds.y + prev, bounds.w, l.position - prev});
        }
        prev = l.position;
    }
    if (dir == Direction::Vertical) {
        out.push_back({bounds.x + prev, bounds.y, extent - prev, bounds.h});
    } else {
        out.push_back({bounds.x, bounds.y + prev, bounds.w, extent - prev});
    }
    return out;
}

std::vector<SeparatorLine> detect_separators(const GrayImage& img, Direction dir, int depth, Routing routing,
                                             const CfsParams& params) {
    if (routing == Routing::BandBased) {
        return detect_band_separators(img, dir, params);
    }
    return detect_edge_separators(img, dir, depth, params);
}

SeparationResult separate(const GrayImage& img, const CfsParams& params, const IlluModel& illu, Variant variant) {
    const Routing routing = img.empty() ? Routing::EdgeBased : route(illu, img);
    return run_engine(img, params, &illu, variant, routing);
}

SeparationResult separate(const GrayImage& img, const CfsParams& params, Routing routing) {
    return run_engine(img, params, nullptr, Variant::ClassifyOnce, routing);
}

Rgb8Image draw_overlay(const GrayImage& img, const std::vector<Rect>& rects) {
    const Rgb8Image gray = to_rgb8(img);
    Rgb8Image out{gray.width, gray.height, 3, {}};
    out.data.reserve(gray.data.size() * 3);
    for (std::uint8_t v : gray.data) {
        out.data.insert(out.data.end(), {v, v, v});
    }
    auto paint = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= out.width || y >= out.height) {
            return;
        }
        const std::size_t i = (static_cast<std::size_t>(y) * out.width + x) * 3;
        out.data[i] = 0;
        out.data[i + 1] = 255;
        out.data[i + 2] = 0;
    };
    for (const Rect& r : rects) {
        for (int x = r.x; x < r.right(); ++x) {
            paint(x, r.y);
            paint(x, r.bottom() - 1);
        }
        for (int y = r.y; y < r.bottom(); ++y) {
            paint(r.x, y);
            paint(r.right() - 1, y);
        }
    }
    return out;
}

}  // namespace cfsep
