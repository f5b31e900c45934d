#include "cfsep/tune.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace cfsep;

namespace {

ParamLadder ladder(const std::string& name, int n) {
    ParamLadder l{name, {}};
    for (int i = 0; i < n; ++i) l.values.push_back(i);
    return l;
}

}  // namespace

TEST(LadderWindow, CentredAndClamped) {
    const auto l = ladder("a", 9);
    EXPECT_EQ(ladder_window(l, 4, 5), (std::vector<double>{2, 3, 4, 5, 6}));
    EXPECT_EQ(ladder_window(l, 0, 5), (std::vector<double>{0, 1, 2, 3, 4}));
    EXPECT_EQ(ladder_window(l, 8, 5), (std::vector<double>{4, 5, 6, 7, 8}));
    EXPECT_EQ(ladder_window(ladder("b", 3), 1, 5), (std::vector<double>{0, 1, 2}));
}

TEST(HillClimb, ConcaveSingleParameter) {
    const SearchSpace space{ladder("a", 5)};
    const auto r = hill_climb(space, {{"a", 0}}, [](const ParamSet& p) { return -std::pow(p.at("a") - 3, 2); });
    EXPECT_EQ(r.best.at("a"), 3);
    EXPECT_EQ(r.best_accuracy, 0.0);
}

TEST(HillClimb, ConstantObjectiveStopsAfterOneRound) {
    const SearchSpace space{ladder("a", 5), ladder("b", 5)};
    const ParamSet init{{"a", 2}, {"b", 1}};
    const auto r = hill_climb(space, init, [](const ParamSet&) { return 0.5; });
    EXPECT_EQ(r.best, init);
    EXPECT_EQ(r.rounds, 1);
}

TEST(HillClimb, SeparableTwoParameters) {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> fa(7);
    std::vector<double> gb(7);
    for (auto& v : fa) v = u(rng);
    for (auto& v : gb) v = u(rng);
    const EvalFn f = [&](const ParamSet& p) {
        return fa[static_cast<int>(p.at("a"))] + gb[static_cast<int>(p.at("b"))];
    };
    const SearchSpace space{ladder("a", 7), ladder("b", 7)};
    double brute = -1;
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) brute = std::max(brute, fa[a] + gb[b]);
    HillClimbOptions opt;
    opt.min_improvement = 0.0;
    const auto r = hill_climb(space, {{"a", 3}, {"b", 3}}, f, opt);
    EXPECT_DOUBLE_EQ(r.best_accuracy, brute);
}

TEST(HillClimb, NeverWorseThanInitialAndBoundedCost) {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::pair<int, int>, double> table;
        const EvalFn f = [&](const ParamSet& p) {
            const auto key = std::make_pair(static_cast<int>(p.at("a")), static_cast<int>(p.at("b")));
            auto it = table.find(key);
            if (it == table.end()) it = table.emplace(key, u(rng)).first;
            return it->second;
        };
        const SearchSpace space{ladder("a", 8), ladder("b", 8)};
        const ParamSet init{{"a", 4}, {"b", 4}};
        const auto r = hill_climb(space, init, f);
        EXPECT_GE(r.best_accuracy, f(init));
        // Initial evaluation, at most 5 values per parameter per round, plus a combined probe per round.
        EXPECT_LE(r.evaluations, 1 + r.rounds * (2 * 5 + 1));
        ASSERT_EQ(r.ranking.size(), 2U);
    }
}

TEST(HillClimb, EvaluationErrorCarriesParams) {
    const SearchSpace space{ladder("a", 5)};
    try {
        hill_climb(space, {{"a", 0}}, [](const ParamSet& p) -> double {
            if (p.at("a") == 2) throw std::runtime_error("boom");
            return 0;
        });
        FAIL();
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.params().at("a"), 2);
    }
}

TEST(GridRefine, TiesDominanceAndBruteForce) {
    const std::vector<std::string> names{"a", "b", "c", "d", "e"};
    std::vector<std::vector<double>> values(5, {0.0, 1.0});
    const ParamSet base{{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}, {"e", 0}, {"z", 7}};

    const auto flat = grid_refine(base, names, values, [](const ParamSet&) { return 1.0; });
    EXPECT_EQ(flat.best, base);
    EXPECT_EQ(flat.evaluations, 32);

    const auto dominant = grid_refine(base, names, values, [](const ParamSet& p) {
        return p.at("a") == 1 && p.at("c") == 1 && p.at("e") == 0 ? 1.0 : 0.0;
    });
    EXPECT_EQ(dominant.best.at("a"), 1);
    EXPECT_EQ(dominant.best.at("c"), 1);
    EXPECT_EQ(dominant.best.at("z"), 7);

    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> table(32);
    for (auto& v : table) v = u(rng);
    const EvalFn f = [&](const ParamSet& p) {
        int idx = 0;
        for (const auto& n : names) idx = idx * 2 + static_cast<int>(p.at(n));
        return table[idx];
    };
    EXPECT_EQ(grid_refine(base, names, values, f).best_accuracy, *std::max_element(table.begin(), table.end()));
}

TEST(Tune, TraceCsvAndSpaceJson) {
    const auto space = search_space_from_json(nlohmann::ordered_json::parse(R"({"z": [1, 2], "a": [0.5]})"));
    ASSERT_EQ(space.size(), 2U);
    EXPECT_EQ(space[0].name, "z");
    EXPECT_EQ(space[1].values, (std::vector<double>{0.5}));

    std::ostringstream os;
    write_trace_csv({{1, "a", 0.5, 0.75}}, os);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "round,parameter,value,accuracy");
}
