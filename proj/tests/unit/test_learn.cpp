#include "cfsep/error.hpp"
#include "cfsep/learn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace cfsep;

namespace {

struct Data {
    FeatureMatrix x;
    std::vector<int> y;
};

Data clusters_1d() {
    Data d;
    for (int i = 0; i < 20; ++i) {
        const double jitter = 0.01 * i;
        d.x.push_back({-1.0 - jitter});
        d.y.push_back(0);
        d.x.push_back({1.0 + jitter});
        d.y.push_back(1);
    }
    return d;
}

Data xor_2d() { return {{{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1}}; }

template <class Model, class Score>
double training_accuracy(const Model& m, const Data& d, Score score) {
    int ok = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i) ok += (score(m, d.x[i]) ? 1 : 0) == d.y[i];
    return static_cast<double>(ok) / static_cast<double>(d.x.size());
}

bool logreg_says_c1(const LogRegModel& m, const std::vector<double>& x) { return predict_proba(m, x) >= 0.5; }
bool svm_says_c1(const LinearSvmModel& m, const std::vector<double>& x) { return decision_value(m, x) > 0.0; }

LogRegModel unit_model(double w, double b) {
    LogRegModel m;
    m.weights = {w};
    m.bias = b;
    m.standardizer.means = {0.0};
    m.standardizer.scales = {1.0};
    return m;
}

}  // namespace

TEST(LogReg, SeparableClusters) {
    const auto d = clusters_1d();
    const auto m = train_logreg(d.x, d.y, {1e-4, 200, 0.1});
    EXPECT_EQ(training_accuracy(m, d, logreg_says_c1), 1.0);
}

TEST(LogReg, ZeroColumnKeepsZeroWeight) {
    auto d = clusters_1d();
    for (auto& row : d.x) row.push_back(0.0);
    const auto m = train_logreg(d.x, d.y);
    EXPECT_EQ(m.weights[1], 0.0);
}

TEST(LogReg, XorIsNotLinearlySeparable) {
    const auto d = xor_2d();
    EXPECT_LE(training_accuracy(train_logreg(d.x, d.y), d, logreg_says_c1), 0.75);
}

TEST(LogReg, SingleClassIsDegenerate) {
    EXPECT_THROW(train_logreg({{1.0}, {2.0}}, std::vector<int>{1, 1}), DegenerateTrainingSet);
}

TEST(LogReg, PredictProbaExamples) {
    EXPECT_DOUBLE_EQ(predict_proba(unit_model(0.0, 0.0), std::vector<double>{3.0}), 0.5);
    EXPECT_GT(predict_proba(unit_model(0.0, 40.0), std::vector<double>{0.0}), 1.0 - 1e-12);
    EXPECT_NEAR(predict_proba(unit_model(1.0, 0.0), std::vector<double>{std::log(3.0)}), 0.75, 1e-12);
    EXPECT_THROW(predict_proba(unit_model(1.0, 0.0), std::vector<double>{1.0, 2.0}), ShapeError);
}

TEST(LogReg, GradientMatchesFiniteDifferences) {
    std::mt19937 rng(19);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        FeatureMatrix z(12, std::vector<double>(4));
        std::vector<int> y(12);
        for (std::size_t i = 0; i < z.size(); ++i) {
            for (double& v : z[i]) v = n(rng);
            y[i] = static_cast<int>(i % 2);
        }
        std::vector<double> w(4);
        for (double& v : w) v = n(rng);
        const double b = n(rng);
        std::vector<double> gw;
        double gb = 0.0;
        detail::logreg_objective(z, y, w, b, 0.1, &gw, &gb);
        const double eps = 1e-6;
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto wp = w;
            auto wm = w;
            wp[j] += eps;
            wm[j] -= eps;
            const double fd = (detail::logreg_objective(z, y, wp, b, 0.1, nullptr, nullptr) -
                               detail::logreg_objective(z, y, wm, b, 0.1, nullptr, nullptr)) /
                              (2 * eps);
            EXPECT_NEAR(gw[j], fd, 1e-5 * std::max(1.0, std::abs(fd)));
        }
        const double fdb = (detail::logreg_objective(z, y, w, b + eps, 0.1, nullptr, nullptr) -
                            detail::logreg_objective(z, y, w, b - eps, 0.1, nullptr, nullptr)) /
                           (2 * eps);
        EXPECT_NEAR(gb, fdb, 1e-5 * std::max(1.0, std::abs(fdb)));
    }
}

TEST(Standardization, AffineRescalingIsAbsorbed) {
    std::mt19937 rng(23);
    std::normal_distribution<double> n(0.0, 1.0);
    Data d;
    for (int i = 0; i < 60; ++i) {
        const double a = n(rng);
        const double b = n(rng);
        d.x.push_back({a, b});
        d.y.push_back(a + 0.5 * b + 0.3 * n(rng) > 0 ? 1 : 0);
    }
    Data scaled = d;
    for (auto& row : scaled.x) row[0] = 7.0 * row[0] - 3.0;
    const auto m1 = train_logreg(d.x, d.y);
    const auto m2 = train_logreg(scaled.x, scaled.y);
    const auto s1 = train_linear_svm(d.x, d.y);
    const auto s2 = train_linear_svm(scaled.x, scaled.y);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        EXPECT_NEAR(predict_proba(m1, d.x[i]), predict_proba(m2, scaled.x[i]), 1e-9);
        EXPECT_EQ(decision_value(s1, d.x[i]) > 0, decision_value(s2, scaled.x[i]) > 0);
    }
}

TEST(Svm, SeparableAndXor) {
    const auto d = clusters_1d();
    EXPECT_EQ(training_accuracy(train_linear_svm(d.x, d.y), d, svm_says_c1), 1.0);
    const auto x = xor_2d();
    EXPECT_LE(training_accuracy(train_linear_svm(x.x, x.y), x, svm_says_c1), 0.75);
}

TEST(Svm, DuplicatedSamplesKeepSignPattern) {
    std::mt19937 rng(29);
    std::normal_distribution<double> n(0.0, 1.0);
    Data d;
    for (int i = 0; i < 30; ++i) {
        const double a = n(rng);
        d.x.push_back({a, n(rng)});
        d.y.push_back(a > 0 ? 1 : 0);
    }
    Data twice = d;
    twice.x.insert(twice.x.end(), d.x.begin(), d.x.end());
    twice.y.insert(twice.y.end(), d.y.begin(), d.y.end());
    const auto s1 = train_linear_svm(d.x, d.y);
    const auto s2 = train_linear_svm(twice.x, twice.y);
    for (const auto& row : d.x) EXPECT_EQ(decision_value(s1, row) > 0, decision_value(s2, row) > 0);
}

TEST(Decide, Thresholds) {
    EXPECT_DOUBLE_EQ(LossMatrix{1.0}.threshold(), 0.5);
    EXPECT_NEAR(LossMatrix{1.86}.threshold(), 0.3497, 1e-4);
    EXPECT_NEAR(LossMatrix::from_threshold(0.35).alpha, 1.857, 1e-3);
    const LossMatrix l{3.0};
    EXPECT_EQ(decide(l.threshold(), l), 1);
    EXPECT_EQ(decide(std::nextafter(l.threshold(), 0.0), l), 0);
}

TEST(Decide, MonotoneInProbabilityAndAlpha) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p = u(rng);
        const double a = 0.05 + 5 * u(rng);
        if (decide(p, LossMatrix{a}) == 1) {
            EXPECT_EQ(decide(std::min(1.0, p + 0.1 * u(rng)), LossMatrix{a}), 1);
            EXPECT_EQ(decide(p, LossMatrix{a * (1 + u(rng))}), 1);
        }
    }
}

TEST(Metrics, Examples) {
    const auto perfect = classifier_metrics(std::vector<int>{1, 0, 1}, std::vector<int>{1, 0, 1});
    EXPECT_EQ(perfect.accuracy_pct, 100.0);
    EXPECT_EQ(perfect.fp_pct, 0.0);
    EXPECT_EQ(perfect.fn_pct, 0.0);

    std::vector<int> truth(100, 0);
    for (int i = 0; i < 59; ++i) truth[i] = 1;
    const auto all_c1 = classifier_metrics(std::vector<int>(100, 1), truth);
    EXPECT_NEAR(all_c1.accuracy_pct, 59.0, 1e-12);
    EXPECT_NEAR(all_c1.fp_pct, 41.0, 1e-12);
    EXPECT_EQ(all_c1.fn_pct, 0.0);

    const auto one_fp = classifier_metrics(std::vector<int>{1, 1, 0, 1}, std::vector<int>{1, 0, 0, 1});
    EXPECT_EQ(one_fp.accuracy_pct, 75.0);
    EXPECT_EQ(one_fp.fp_pct, 25.0);
    EXPECT_EQ(one_fp.fn_pct, 0.0);

    EXPECT_THROW(classifier_metrics(std::vector<int>{1}, std::vector<int>{1, 0}), ShapeError);
}

TEST(ModelIo, JsonRoundTrip) {
    const auto d = clusters_1d();
    LogRegModel m = train_logreg(d.x, d.y);
    m.metadata = {"434", 8, 5, 8, 3};
    const auto path = std::filesystem::temp_directory_path() / "cfsep_model_roundtrip.json";
    save_model(m, path);
    const AnyModel back = load_model(path);
    std::filesystem::remove(path);
    ASSERT_TRUE(std::holds_alternative<LogRegModel>(back));
    const auto& r = std::get<LogRegModel>(back);
    EXPECT_EQ(r.weights, m.weights);
    EXPECT_EQ(r.bias, m.bias);
    EXPECT_EQ(r.metadata.spec, "434");
    EXPECT_EQ(metadata_of(back).k, 8);
    EXPECT_TRUE(has_probabilities(back));
}
