#include "cfsep/cfs_params.hpp"
#include "cfsep/error.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

using namespace cfsep;

namespace {

CfsParams read_preset(const std::string& name) {
    std::ifstream in(std::string(CFSEP_SOURCE_DIR) + "/presets/" + name + ".json");
    return params_from_json(nlohmann::json::parse(in));
}

}  // namespace

TEST(CfsParams, OptimalDefaults) {
    const CfsParams p;
    EXPECT_EQ(p, CfsParams::optimal());
    EXPECT_EQ(p.mindim, 200);
    EXPECT_EQ(p.elim_area, 0.03);
    EXPECT_EQ(p.edge_houghratio_min, 0.2);
    EXPECT_EQ(p.edge_houghratio_base, 1.5);
    EXPECT_EQ(p.band_maxdepth, 4);
    EXPECT_EQ(p.decision_threshold, 0.1);
    EXPECT_EQ(p.edge_maxdepth, 10);
    EXPECT_NO_THROW(p.validate());
    EXPECT_NO_THROW(CfsParams::initial().validate());
}

TEST(CfsParams, PresetFilesMatchBuiltIns) {
    EXPECT_EQ(read_preset("optimal"), CfsParams::optimal());
    EXPECT_EQ(read_preset("initial"), CfsParams::initial());
}

TEST(CfsParams, ValidationAndRoundTrips) {
    CfsParams bad;
    bad.elim_area = 1.5;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = CfsParams{};
    bad.edge_houghratio_base = 0.9;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = CfsParams{};
    bad.band_maxdepth = 0;
    EXPECT_THROW(bad.validate(), DomainError);

    CfsParams p = CfsParams::initial();
    EXPECT_EQ(params_from_json(to_json(p)), p);
    EXPECT_EQ(from_param_set(to_param_set(p), CfsParams{}), p);
    const auto partial = params_from_json(nlohmann::json{{"mindim", 64}});
    EXPECT_EQ(partial.mindim, 64);
    EXPECT_EQ(partial.elim_area, CfsParams{}.elim_area);
}

TEST(GapVariance, HandComputed) {
    // Gaps 0.25 x4.
    EXPECT_NEAR(normalized_gap_variance({25, 50, 75}, 100), 0.0, 1e-15);
    // Gaps 0.1, 0.9: mean 0.5, variance 0.16.
    EXPECT_NEAR(normalized_gap_variance({10}, 100), 0.16, 1e-12);
    EXPECT_NEAR(normalized_gap_variance({50}, 100), 0.0, 1e-15);
}

TEST(RegularityPrune, DropsWeakestUntilRegular) {
    // 50 alone is perfectly regular; adding 10 makes gaps 0.1/0.4/0.5.
    EXPECT_EQ(regularity_prune({50, 10}, 100, 0.01), (std::vector<int>{50}));
    EXPECT_EQ(regularity_prune({50, 10}, 100, 0.5), (std::vector<int>{50, 10}));
    EXPECT_EQ(regularity_prune({10}, 100, 0.0), (std::vector<int>{10}));
    EXPECT_TRUE(regularity_prune({}, 100, 0.1).empty());

    std::mt19937 rng(67);
    for (int i = 0; i < 200; ++i) {
        std::vector<int> ranked(1 + rng() % 6);
        for (int& v : ranked) v = 1 + static_cast<int>(rng() % 98);
        const auto kept = regularity_prune(ranked, 100, 0.02);
        ASSERT_FALSE(kept.empty());
        EXPECT_EQ(kept.front(), ranked.front());
        EXPECT_TRUE(std::equal(kept.begin(), kept.end(), ranked.begin()));
        if (kept.size() > 1) {
            std::vector<double> pos(kept.begin(), kept.end());
            EXPECT_LE(normalized_gap_variance(pos, 100), 0.02);
        }
    }
}
