/**
 * @file tune.hpp
 * @brief Parameter search: coordinate hill climbing over value ladders
 *        followed by an exhaustive two-value grid over the most effective
 *        parameters.
 */
#pragma once

#include "cfsep/cfs_params.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cfsep {

/// Ordered candidate values of one parameter.
struct ParamLadder {
    std::string name;
    std::vector<double> values;
};

using SearchSpace = std::vector<ParamLadder>;
using EvalFn = std::function<double(const ParamSet&)>;

struct TraceRow {
    int round = 0;
    std::string parameter;  ///< "initial", "combined", "grid" or a parameter name
    double value = 0.0;
    double accuracy = 0.0;
};

struct HillClimbOptions {
    int window = 5;                 ///< ladder values examined around the current one
    double min_improvement = 0.05;  ///< stop when a round gains no more than this
    int max_rounds = 100;
};

struct HillClimbResult {
    ParamSet best;
    double best_accuracy = 0.0;
    std::vector<TraceRow> trace;
    int evaluations = 0;
    int rounds = 0;
    /// Parameters ordered by the best accuracy reached while varying them in
    /// the last round they were varied (descending; ties in space order).
    std::vector<std::string> ranking;
    /// Runner-up value of each parameter from that same round.
    ParamSet runner_up;
};

struct GridResult {
    ParamSet best;
    double best_accuracy = 0.0;
    std::vector<TraceRow> trace;
    int evaluations = 0;
};

/// Thrown with the offending parameters when the evaluation function fails.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, ParamSet params)
        : std::runtime_error(what), params_(std::move(params)) {}
    const ParamSet& params() const { return params_; }

private:
    ParamSet params_;
};

/// Window of at most `window` ladder values centred on `current`.
std::vector<double> ladder_window(const ParamLadder& ladder, double current, int window);

/// Every value of `initial` named in `space` must appear in its ladder.
HillClimbResult hill_climb(const SearchSpace& space, const ParamSet& initial, const EvalFn& eval,
                           const HillClimbOptions& opt = {});

/// Exhaustive search over `values` (two per parameter, in `names` order).
/// Ties keep the combination enumerated first, which is the all-first-values
/// combination when every score is equal.
GridResult grid_refine(const ParamSet& base, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& values, const EvalFn& eval);

struct TuneResult {
    ParamSet best;
    double best_accuracy = 0.0;
    std::vector<TraceRow> trace;
    int evaluations = 0;
};

/// Hill climbing, then a grid over the `top` best-ranked parameters using
/// their best and runner-up values.
TuneResult tune(const SearchSpace& space, const ParamSet& initial, const EvalFn& eval, const HillClimbOptions& opt = {},
                int top = 5);

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out);

/// {"name": [v1, v2, ...], ...}; parameters keep their order in the document.
SearchSpace search_space_from_json(const nlohmann::ordered_json& j);

}  // namespace cfsep
