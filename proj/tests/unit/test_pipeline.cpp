#include "cfsep/error.hpp"
#include "cfsep/image_io.hpp"
#include "cfsep/pipeline.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>

using namespace cfsep;

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestIndexError) {
    for (int workers : {1, 3}) {
        try {
            parallel_for(50, workers, [](std::size_t i) {
                if (i == 7 || i == 30) throw DomainError("at " + std::to_string(i));
            });
            FAIL();
        } catch (const DomainError& e) {
            EXPECT_STREQ(e.what(), "at 7");
        }
    }
}

TEST(SeparateFigure, PredictedSingleIsWholeImage) {
    const GrayImage img(40, 30, 0.5);
    const auto a = separate_figure(img, "x", false, CfsParams{}, nullptr, Variant::ClassifyOnce, std::nullopt);
    EXPECT_FALSE(a.is_compound);
    EXPECT_EQ(a.rects, (std::vector<Rect>{{0, 0, 40, 30}}));
    EXPECT_THROW(separate_figure(img, "x", true, CfsParams{}, nullptr, Variant::ClassifyOnce, std::nullopt),
                 DomainError);
}

TEST(ImageIo, PngRoundTripAndProbe) {
    GrayImage img(5, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 5; ++x) img.at(x, y) = (x + 5 * y) / 255.0;
    const auto path = std::filesystem::temp_directory_path() / "cfsep_io_roundtrip.png";
    write_png(img, path);
    const auto back = load_gray(path);
    EXPECT_EQ(probe_image_size(path), std::make_pair(5, 3));
    std::filesystem::remove(path);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 5; ++x) EXPECT_NEAR(back.at(x, y), img.at(x, y), 1e-9);
    EXPECT_THROW(load_gray(path), Error);
}
