#include "cfsep/band_sep.hpp"
#include "cfsep/edge_sep.hpp"
#include "cfsep/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <cstdlib>
#include <random>

using namespace cfsep;

namespace {

GrayImage noise(int w, int h, double lo, double hi, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (double& v : px) v = u(rng);
    return GrayImage(w, h, px);
}

// Left half dark noise, right half bright noise.
GrayImage stitched(int w, int h, unsigned seed) {
    auto img = noise(w, h, 0.15, 0.3, seed);
    const auto right = noise(w, h, 0.7, 0.85, seed + 1);
    for (int y = 0; y < h; ++y)
        for (int x = w / 2; x < w; ++x) img.at(x, y) = right.at(x, y);
    return img;
}

GrayImage gutter_pair(int panel_w, int gutter, int h, double gutter_value, unsigned seed) {
    GrayImage img(2 * panel_w + gutter, h, gutter_value);
    const auto a = noise(panel_w, h, 0.1, 0.5, seed);
    const auto b = noise(panel_w, h, 0.1, 0.5, seed + 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < panel_w; ++x) {
            img.at(x, y) = a.at(x, y);
            img.at(panel_w + gutter + x, y) = b.at(x, y);
        }
    }
    return img;
}

std::vector<int> positions(const std::vector<SeparatorLine>& lines) {
    std::vector<int> out;
    for (const auto& l : lines) out.push_back(l.position);
    return out;
}

}  // namespace

TEST(PeakThreshold, Examples) {
    EXPECT_DOUBLE_EQ(peak_threshold({0, 100, 0.0}, 0.2, 1.5), 20.0);
    EXPECT_DOUBLE_EQ(peak_threshold({5, 42, 1.0}, 0.3, 2.0), 42.0);
    EXPECT_NEAR(peak_threshold({2, 100, 0.25}, 0.2, 1.5), 72.5, 1e-12);
    // beta^k growth is clamped: h saturates at 1 so t = m.
    EXPECT_DOUBLE_EQ(peak_threshold({30, 10, 0.0}, 0.2, 1.5), 10.0);
}

TEST(ArtificialBorder, FrameLayout) {
    const auto framed = add_artificial_border(GrayImage(6, 4, 0.5));
    EXPECT_EQ(framed.width(), 10);
    EXPECT_EQ(framed.height(), 8);
    EXPECT_EQ(framed.at(0, 0), 0.0);
    EXPECT_EQ(framed.at(1, 1), 1.0);
    EXPECT_EQ(framed.at(1, 4), 1.0);
    EXPECT_EQ(framed.at(2, 2), 0.5);
    EXPECT_EQ(framed.at(9, 7), 0.0);

    const auto edges = sobel_edges(add_artificial_border(GrayImage(12, 12, 0.5)), Direction::Vertical, 0.02);
    for (int y = 0; y < edges.height(); ++y) {
        for (int x = 0; x < edges.width(); ++x) {
            if (edges.at(x, y)) {
                const bool near_frame = x <= 3 || x >= edges.width() - 4;
                EXPECT_TRUE(near_frame) << x << "," << y;
            }
        }
    }
}

TEST(ConsolidatedLength, GapFilling) {
    auto bits = [](const std::string& s) {
        std::vector<bool> v;
        for (char c : s) v.push_back(c == '#');
        return v;
    };
    const auto a = bits("####..####....##");
    std::unique_ptr<bool[]> buf(new bool[a.size()]);
    for (std::size_t i = 0; i < a.size(); ++i) buf[i] = a[i];
    const std::span<const bool> s(buf.get(), a.size());
    EXPECT_EQ(consolidated_length(s, 2, 1), 10);
    EXPECT_EQ(consolidated_length(s, 4, 1), 16);
    EXPECT_EQ(consolidated_length(s, 4, 3), 10);
    EXPECT_EQ(consolidated_length(s, 0, 1), 4);
}

TEST(EdgeSeparators, BlankImage) {
    const CfsParams p;
    EXPECT_TRUE(detect_edge_separators(GrayImage(300, 300, 1.0), Direction::Vertical, 0, p).empty());
    EXPECT_TRUE(detect_edge_separators(GrayImage(300, 300, 1.0), Direction::Horizontal, 0, p).empty());
}

TEST(EdgeSeparators, StitchedStep) {
    const CfsParams p;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto img = stitched(320, 240, seed);
        const auto lines = detect_edge_separators(img, Direction::Vertical, 0, p);
        ASSERT_EQ(lines.size(), 1U) << seed;
        EXPECT_LE(std::abs(lines[0].position - 160), 1);
        EXPECT_EQ(lines[0].direction, Direction::Vertical);
    }
}

TEST(EdgeSeparators, BorderFilterDropsLineNearEdge) {
    auto img = noise(400, 300, 0.6, 0.7, 9);
    for (int y = 0; y < 300; ++y) img.at(8, y) = 0.0;
    CfsParams p;
    p.edge_minborderdist = 0.05;
    EXPECT_TRUE(detect_edge_separators(img, Direction::Vertical, 0, p).empty());
    p.edge_minborderdist = 0.01;
    EXPECT_FALSE(detect_edge_separators(img, Direction::Vertical, 0, p).empty());
}

TEST(EdgeSeparators, ReturnedLinesPassEveryFilter) {
    SynthSpec spec;
    spec.count = 12;
    spec.separator_kinds = {SeparatorKind::BorderEdge, SeparatorKind::Stitched};
    spec.content = ContentKind::Noise;
    spec.seed = 77;
    const CfsParams p;
    for (const auto& fig : synth_generate(spec)) {
        for (auto dir : {Direction::Vertical, Direction::Horizontal}) {
            const auto t = detect_edge_separators_traced(fig.image, dir, 0, p);
            const int extent = fig.image.extent_across(dir);
            const int length = fig.image.line_length(dir);
            int prev = 0;
            for (const auto& l : t.lines) {
                EXPECT_GT(l.position, prev);
                prev = l.position;
                EXPECT_GE(t.hough[l.position + kArtificialBorder], t.threshold);
                EXPECT_GE(l.position, p.edge_minborderdist * extent);
                EXPECT_LE(l.position, extent - p.edge_minborderdist * extent);
                const auto run = edge_line(t.edges, dir, l.position);
                std::unique_ptr<bool[]> buf(new bool[run.size()]);
                for (std::size_t i = 0; i < run.size(); ++i) buf[i] = run[i];
                EXPECT_GE(consolidated_length({buf.get(), run.size()}, p.edge_gapratio * length,
                                              p.edge_lenratio * length),
                          p.edge_minseplength * length);
            }
            if (!t.candidates.empty() && !t.regular.empty()) EXPECT_EQ(t.regular.front(), t.candidates.front());
        }
    }
}

TEST(EdgeSeparators, StricterFiltersNeverAddLines) {
    SynthSpec spec;
    spec.count = 10;
    spec.separator_kinds = {SeparatorKind::BorderEdge, SeparatorKind::Stitched};
    spec.content = ContentKind::Noise;
    spec.seed = 78;
    for (const auto& fig : synth_generate(spec)) {
        const CfsParams base;
        const auto lines = positions(detect_edge_separators(fig.image, Direction::Vertical, 0, base));
        CfsParams longer = base;
        longer.edge_minseplength = 0.8;
        CfsParams wider = base;
        wider.edge_minborderdist = 0.2;
        for (const auto& p : {longer, wider}) {
            for (int pos : positions(detect_edge_separators(fig.image, Direction::Vertical, 0, p))) {
                EXPECT_NE(std::find(lines.begin(), lines.end(), pos), lines.end());
            }
        }
    }
}

TEST(MaxRuns, Examples) {
    EXPECT_TRUE(max_runs(std::vector<bool>(5, false)).empty());
    EXPECT_EQ(max_runs(std::vector<bool>(7, true)), (std::vector<cfsep::Run>{{0, 7}}));
    EXPECT_EQ(max_runs(std::vector<bool>{true, true, false, true}), (std::vector<cfsep::Run>{{0, 2}, {3, 1}}));
}

TEST(BandSeparators, SolidWhiteGivesCentreLine) {
    const auto lines = detect_band_separators(GrayImage(300, 200, 1.0), Direction::Vertical, CfsParams{});
    EXPECT_EQ(positions(lines), (std::vector<int>{150}));
}

TEST(BandSeparators, WhiteAndGrayGutters) {
    for (double gutter_value : {1.0, 0.6}) {
        const auto img = gutter_pair(150, 30, 220, gutter_value, 3);
        const auto lines = detect_band_separators(img, Direction::Vertical, CfsParams{});
        ASSERT_EQ(lines.size(), 1U) << gutter_value;
        EXPECT_LE(std::abs(lines[0].position - 165), 1);
        EXPECT_TRUE(detect_band_separators(img, Direction::Horizontal, CfsParams{}).empty());
    }
}

TEST(BandSeparators, WiderMinimumNeverAddsBands) {
    SynthSpec spec;
    spec.count = 10;
    spec.separator_kinds = {SeparatorKind::WhiteBand};
    spec.seed = 79;
    for (const auto& fig : synth_generate(spec)) {
        for (auto dir : {Direction::Vertical, Direction::Horizontal}) {
            CfsParams p;
            const auto base = positions(detect_band_separators(fig.image, dir, p));
            int prev = 0;
            for (int pos : base) {
                EXPECT_GT(pos, prev);
                EXPECT_LT(pos, fig.image.extent_across(dir));
                prev = pos;
            }
            p.band_minsepwidth = 0.05;
            for (int pos : positions(detect_band_separators(fig.image, dir, p))) {
                EXPECT_NE(std::find(base.begin(), base.end(), pos), base.end());
            }
        }
    }
}
