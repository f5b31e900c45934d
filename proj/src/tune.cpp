#include "cfsep/tune.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cfsep {
namespace {

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

std::size_t ladder_index(const ParamLadder& ladder, double v) {
    for (std::size_t i = 0; i < ladder.values.size(); ++i) {
        if (same_value(ladder.values[i], v)) return i;
    }
    throw DomainError("value of '" + ladder.name + "' is not on its ladder");
}

class Evaluator {
public:
    explicit Evaluator(const EvalFn& fn) : fn_(fn) {}

    double operator()(const ParamSet& p) {
        ++count_;
        try {
            return fn_(p);
        } catch (const EvaluationError&) {
            throw;
        } catch (const std::exception& e) {
            throw EvaluationError(std::string("evaluation failed: ") + e.what(), p);
        }
    }

    int count() const { return count_; }

private:
    const EvalFn& fn_;
    int count_ = 0;
};

}  // namespace

std::vector<double> ladder_window(const ParamLadder& ladder, double current, int window) {
    const int n = static_cast<int>(ladder.values.size());
    const int i = static_cast<int>(ladder_index(ladder, current));
    const int w = std::min(window, n);
    const int start = std::clamp(i - w / 2, 0, n - w);
    return {ladder.values.begin() + start, ladder.values.begin() + start + w};
}

HillClimbResult hill_climb(const SearchSpace& space, const ParamSet& initial, const EvalFn& eval,
                           const HillClimbOptions& opt) {
    for (const auto& ladder : space) {
        if (!initial.contains(ladder.name)) {
            throw DomainError("initial parameters lack '" + ladder.name + "'");
        }
        ladder_index(ladder, initial.at(ladder.name));
    }
    Evaluator evaluate(eval);
    HillClimbResult res;
    ParamSet current = initial;
    double current_acc = evaluate(current);
    res.trace.push_back({0, "initial", 0.0, current_acc});
    res.best = current;
    res.best_accuracy = current_acc;

    std::map<std::string, double> param_best;
    std::vector<const ParamLadder*> varied;
    for (const auto& ladder : space) varied.push_back(&ladder);

    for (int round = 1; round <= opt.max_rounds && !varied.empty(); ++round) {
        res.rounds = round;
        ParamSet combined = current;
        ParamSet best_single = current;
        double best_single_acc = current_acc;
        for (const ParamLadder* ladder : varied) {
            const double cur = current.at(ladder->name);
            std::vector<std::pair<double, double>> scored{{cur, current_acc}};
            for (double v : ladder_window(*ladder, cur, opt.window)) {
                if (same_value(v, cur)) continue;
                ParamSet cand = current;
                cand[ladder->name] = v;
                const double a = evaluate(cand);
                res.trace.push_back({round, ladder->name, v, a});
                scored.emplace_back(v, a);
                if (a > best_single_acc) {
                    best_single_acc = a;
                    best_single = cand;
                }
            }
            std::stable_sort(scored.begin(), scored.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
            combined[ladder->name] = scored[0].first;
            param_best[ladder->name] = scored[0].second;
            if (scored.size() > 1) {
                res.runner_up[ladder->name] = scored[1].first;
            }
        }

        ParamSet next = current;
        double next_acc = current_acc;
        if (combined != current) {
            const double a = evaluate(combined);
            res.trace.push_back({round, "combined", 0.0, a});
            next = combined;
            next_acc = a;
        }
        if (best_single_acc > next_acc) {
            next = best_single;
            next_acc = best_single_acc;
        }
        if (next_acc > res.best_accuracy) {
            res.best = next;
            res.best_accuracy = next_acc;
        }
        const double improvement = next_acc - current_acc;

        std::vector<const ParamLadder*> changed;
        for (const auto& ladder : space) {
            if (!same_value(next.at(ladder.name), current.at(ladder.name))) changed.push_back(&ladder);
        }
        current = next;
        current_acc = next_acc;
        varied = changed;
        if (improvement <= opt.min_improvement) {
            break;
        }
    }

    for (const auto& ladder : space) res.ranking.push_back(ladder.name);
    std::stable_sort(res.ranking.begin(), res.ranking.end(), [&](const std::string& a, const std::string& b) {
        return param_best[a] > param_best[b];
    });
    res.evaluations = evaluate.count();
    return res;
}

GridResult grid_refine(const ParamSet& base, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& values, const EvalFn& eval) {
    if (names.size() != values.size()) {
        throw DomainError("grid needs one value list per parameter");
    }
    for (const auto& v : values) {
        if (v.size() != 2) throw DomainError("grid needs exactly two values per parameter");
    }
    Evaluator evaluate(eval);
    GridResult res;
    const std::size_t n = names.size();
    bool first = true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        ParamSet p = base;
        for (std::size_t i = 0; i < n; ++i) {
            // The first parameter varies slowest.
            p[names[i]] = values[i][(mask >> (n - 1 - i)) & 1U];
        }
        const double a = evaluate(p);
        res.trace.push_back({0, "grid", static_cast<double>(mask), a});
        if (first || a > res.best_accuracy) {
            res.best = p;
            res.best_accuracy = a;
            first = false;
        }
    }
    res.evaluations = evaluate.count();
    return res;
}

TuneResult tune(const SearchSpace& space, const ParamSet& initial, const EvalFn& eval, const HillClimbOptions& opt,
                int top) {
    HillClimbResult hc = hill_climb(space, initial, eval, opt);
    TuneResult res{hc.best, hc.best_accuracy, hc.trace, hc.evaluations};

    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    for (const std::string& name : hc.ranking) {
        if (static_cast<int>(names.size()) >= top) break;
        const auto ladder = std::find_if(space.begin(), space.end(), [&](const auto& l) { return l.name == name; });
        const double best = hc.best.at(name);
        double alt = best;
        if (hc.runner_up.contains(name) && !same_value(hc.runner_up.at(name), best)) {
            alt = hc.runner_up.at(name);
        } else if (ladder->values.size() > 1) {
            const std::size_t i = ladder_index(*ladder, best);
            alt = ladder->values[i + 1 < ladder->values.size() ? i + 1 : i - 1];
        } else {
            continue;
        }
        names.push_back(name);
        values.push_back({best, alt});
    }
    if (names.empty()) {
        return res;
    }
    const GridResult grid = grid_refine(hc.best, names, values, eval);
    const int rounds = hc.rounds;
    for (TraceRow row : grid.trace) {
        row.round = rounds + 1;
        res.trace.push_back(row);
    }
    res.evaluations += grid.evaluations;
    if (grid.best_accuracy > res.best_accuracy) {
        res.best = grid.best;
        res.best_accuracy = grid.best_accuracy;
    }
    return res;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out) {
    out << "round,parameter,value,accuracy\n";
    for (const auto& r : trace) {
        out << r.round << ',' << r.parameter << ',' << r.value << ',' << r.accuracy << '\n';
    }
}

SearchSpace search_space_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) {
        throw ParseError("search space must be a JSON object", 0);
    }
    SearchSpace space;
    try {
        for (const auto& [name, vals] : j.items()) {
            ParamLadder ladder{name, {}};
            for (const auto& v : vals) ladder.values.push_back(v.get<double>());
            if (ladder.values.empty()) throw ParseError("empty ladder for '" + name + "'", 0);
            space.push_back(std::move(ladder));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed search space: ") + e.what(), 0);
    }
    return space;
}

}  // namespace cfsep
