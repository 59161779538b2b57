#include "mtsa/solver/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

namespace mtsa::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long double kOracleGridCap = 3.0e8L;
constexpr int kWaterfillSteps = 48;

double feas_allow(double budget) { return 1e-9 * std::max(1.0, budget); }

// Compact propagation tables shared by every solver.
struct Prepared {
    const pe::GroundInstance* g;
    int P = 0;
    int Tf = 0;
    std::vector<double> futDemand;
    std::vector<int> futPeriod;
    std::vector<double> constLower;  // per period, includes the 0 floor
    struct Row {
        int p;
        int fut;
        double coef;
    };
    std::vector<Row> rows;  // rows referencing future meter values
    std::vector<double> maxFutDemand;
    std::vector<double> sumFutShed;  // energy shed at level 0, per period
    std::vector<std::vector<double>> demandsByPeriod;  // ascending, unique

    explicit Prepared(const pe::GroundInstance& gi) : g(&gi) {
        P = static_cast<int>(gi.futurePeriods.size());
        Tf = static_cast<int>(gi.futureTimes.size());
        futDemand.reserve(Tf);
        futPeriod.reserve(Tf);
        std::map<TimeIndex, int> futIndex;
        for (int i = 0; i < Tf; ++i) {
            TimeIndex t = gi.futureTimes[i];
            futIndex[t] = i;
            futDemand.push_back(gi.demand_at(t));
            futPeriod.push_back(gi.period_index(gi.calendar.row(t).payPeriod));
        }
        constLower.assign(P, 0.0);
        maxFutDemand.assign(P, 0.0);
        sumFutShed.assign(P, 0.0);
        demandsByPeriod.assign(P, {});
        for (int i = 0; i < Tf; ++i) {
            int p = futPeriod[i];
            maxFutDemand[p] = std::max(maxFutDemand[p], futDemand[i]);
            sumFutShed[p] += futDemand[i] * gi.timeIntervalSize;
            demandsByPeriod[p].push_back(futDemand[i]);
        }
        for (auto& d : demandsByPeriod) {
            std::sort(d.begin(), d.end());
            d.erase(std::unique(d.begin(), d.end()), d.end());
        }
        for (const auto& row : gi.supplyRows) {
            double contribution = -1.0;
            if (!row.onMeter || row.time <= 0)
                contribution = row.coef * gi.demand_at(row.time);
            if (contribution >= 0.0) {
                constLower[row.periodIdx] = std::max(constLower[row.periodIdx], contribution);
                continue;
            }
            rows.push_back({row.periodIdx, futIndex.at(row.time), row.coef});
        }
    }

    // Minimal feasible supply and objective for a bound vector. kwScratch is
    // resized to the future interval count.
    double eval(std::span<const double> bounds, std::vector<double>& kwScratch,
                std::vector<double>& supplyScratch, double& shedOut) const {
        kwScratch.resize(Tf);
        supplyScratch.resize(P);
        double shed = 0.0;
        if (g->hasMeter) {
            for (int i = 0; i < Tf; ++i) {
                double kw = std::min(futDemand[i], bounds[futPeriod[i]]);
                kwScratch[i] = kw;
                shed += futDemand[i] - kw;
            }
            shed *= g->timeIntervalSize;
        } else {
            for (int i = 0; i < Tf; ++i) kwScratch[i] = futDemand[i];
        }
        shedOut = shed;
        double total = 0.0;
        for (int p = 0; p < P; ++p)
            supplyScratch[p] = std::max(bounds[p], constLower[p]);
        for (const Row& row : rows) {
            double v = row.coef * kwScratch[row.fut];
            if (v > supplyScratch[row.p]) supplyScratch[row.p] = v;
        }
        for (int p = 0; p < P; ++p) total += supplyScratch[p];
        return g->rate * total;
    }

    // Energy shed in period p at bound level.
    double period_shed(int p, double level) const {
        double shed = 0.0;
        for (std::size_t i = 0; i < futDemand.size(); ++i)
            if (futPeriod[static_cast<int>(i)] == p && futDemand[i] > level)
                shed += futDemand[i] - level;
        return shed * g->timeIntervalSize;
    }

    // Smallest level at which the period sheds no more than targetEnergy.
    double water_level(int p, double targetEnergy) const {
        if (targetEnergy <= 0) return maxFutDemand[p];
        if (targetEnergy >= sumFutShed[p]) return 0.0;
        std::vector<double> demands;
        for (std::size_t i = 0; i < futDemand.size(); ++i)
            if (futPeriod[static_cast<int>(i)] == p) demands.push_back(futDemand[i]);
        std::sort(demands.begin(), demands.end(), std::greater<>());
        double target = targetEnergy / g->timeIntervalSize;
        double acc = 0.0;  // sum of demands above the current segment
        for (std::size_t k = 0; k < demands.size(); ++k) {
            acc += demands[k];
            double lo = k + 1 < demands.size() ? demands[k + 1] : 0.0;
            // On [lo, demands[k]] the shed is acc - (k+1) * level.
            double level = (acc - target) / static_cast<double>(k + 1);
            if (level >= lo - 1e-12) return std::max(level, 0.0);
        }
        return 0.0;
    }
};

Solution make_solution(const pe::GroundInstance& g, const Prepared& prep,
                       std::span<const double> bounds, SolveStatus status) {
    std::vector<double> kw, supply;
    double shed = 0.0;
    double obj = prep.eval(bounds, kw, supply, shed);
    Solution s;
    s.status = status;
    s.objective = obj;
    s.shedTotal = shed;
    for (int p = 0; p < prep.P; ++p) {
        s.bounds[g.futurePeriods[p]] = bounds[p];
        s.supply[g.futurePeriods[p]] = supply[p];
    }
    if (g.hasMeter) {
        for (TimeIndex t : g.pastTimes) s.meter[t] = g.demand_at(t);
        for (int i = 0; i < prep.Tf; ++i) s.meter[g.futureTimes[i]] = kw[i];
    }
    return s;
}

std::vector<double> bounds_vector(const pe::GroundInstance& g, const Solution& s) {
    std::vector<double> bounds;
    bounds.reserve(g.futurePeriods.size());
    for (PeriodIndex p : g.futurePeriods) {
        auto it = s.bounds.find(p);
        if (it == s.bounds.end())
            throw SolverError(SolverError::Kind::DimensionMismatch,
                              "solution has no bound for period " + std::to_string(p));
        bounds.push_back(it->second);
    }
    return bounds;
}

// Replaces the bound vector by the derived supply values when that preserves
// feasibility and the objective; maximizes headroom before the monitor fires.
void lift_bounds(const pe::GroundInstance& g, const Prepared& prep,
                 std::vector<double>& bounds, double objective) {
    std::vector<double> kw, supply;
    double shed = 0.0;
    prep.eval(bounds, kw, supply, shed);
    std::vector<double> lifted = supply;
    double liftedShed = 0.0;
    double liftedObj = prep.eval(lifted, kw, supply, liftedShed);
    if (liftedShed <= g.budget + feas_allow(g.budget) &&
        std::fabs(liftedObj - objective) <= 1e-9 * std::max(1.0, std::fabs(objective)))
        bounds = lifted;
}

}  // namespace

std::string_view status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "feasible";
}

Evaluation evaluate(const pe::GroundInstance& g, std::span<const double> bounds) {
    if (bounds.size() != g.futurePeriods.size())
        throw SolverError(SolverError::Kind::DimensionMismatch,
                          "expected " + std::to_string(g.futurePeriods.size()) +
                              " bounds, got " + std::to_string(bounds.size()));
    Prepared prep(g);
    std::vector<double> kw, supply;
    double shed = 0.0;
    double obj = prep.eval(bounds, kw, supply, shed);

    Evaluation ev;
    ev.objective = obj;
    ev.shedTotal = shed;
    for (int p = 0; p < prep.P; ++p) ev.supply[g.futurePeriods[p]] = supply[p];
    if (g.hasMeter) {
        for (TimeIndex t : g.pastTimes) ev.meter[t] = g.demand_at(t);
        for (int i = 0; i < prep.Tf; ++i) ev.meter[g.futureTimes[i]] = kw[i];
    }
    ev.feasible = shed <= g.budget + feas_allow(g.budget);
    if (!ev.feasible)
        ev.violations.push_back(
            {"interruptionBudget", std::nullopt, std::nullopt, g.budget - shed});
    return ev;
}

Solution solve_zero_budget(const pe::GroundInstance& g) {
    if (g.budget != 0.0)
        throw SolverError(SolverError::Kind::NonzeroBudget,
                          "closed form requires a zero budget, got " +
                              std::to_string(g.budget));
    Prepared prep(g);
    std::vector<double> supply(prep.P, 0.0);
    for (int p = 0; p < prep.P; ++p) supply[p] = prep.constLower[p];
    for (const auto& row : prep.rows)
        supply[row.p] = std::max(supply[row.p], row.coef * prep.futDemand[row.fut]);
    if (g.hasMeter)
        for (int p = 0; p < prep.P; ++p)
            supply[p] = std::max(supply[p], prep.maxFutDemand[p]);
    return make_solution(g, prep, supply, SolveStatus::Optimal);
}

Solution solve_breakpoints(const pe::GroundInstance& g, const SolverConfig& config) {
    Prepared prep(g);
    const double feasTol = feas_allow(g.budget);

    std::vector<std::vector<double>> candidates(prep.P);
    for (int p = 0; p < prep.P; ++p) {
        std::set<double> levels(prep.demandsByPeriod[p].begin(),
                                prep.demandsByPeriod[p].end());
        levels.insert(prep.maxFutDemand[p]);
        if (g.hasMeter && g.budget > 0)
            for (int q = 1; q <= kWaterfillSteps; ++q)
                levels.insert(
                    prep.water_level(p, g.budget * q / double(kWaterfillSteps)));
        candidates[p].assign(levels.begin(), levels.end());
    }

    long double combos = 1;
    for (const auto& c : candidates) combos *= static_cast<long double>(c.size());
    if (combos > static_cast<long double>(config.maxExhaustiveCombos))
        throw SolverError(SolverError::Kind::ComboLimitExceeded,
                          "candidate cross-product " + std::to_string((double)combos) +
                              " exceeds maxExhaustiveCombos");

    std::vector<double> current(prep.P, 0.0), best;
    std::vector<double> kw, supply;
    double bestObj = kInf;
    std::vector<std::size_t> idx(prep.P, 0);
    // Odometer over the cross product, ascending lexicographic order; on
    // objective ties the later (larger) vector wins.
    while (true) {
        for (int p = 0; p < prep.P; ++p) current[p] = candidates[p][idx[p]];
        double shed = 0.0;
        double obj = prep.eval(current, kw, supply, shed);
        if (shed <= g.budget + feasTol && obj <= bestObj) {
            bestObj = obj;
            best = current;
        }
        int p = prep.P - 1;
        while (p >= 0 && ++idx[p] == candidates[p].size()) idx[p--] = 0;
        if (p < 0) break;
    }

    // Coordinate-wise golden-section refinement between neighboring levels.
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int pass = 0; pass < config.refinementIters; ++pass) {
        bool improved = false;
        for (int p = 0; p < prep.P; ++p) {
            const auto& levels = candidates[p];
            double cur = best[p];
            auto above = std::upper_bound(levels.begin(), levels.end(), cur);
            auto below = std::lower_bound(levels.begin(), levels.end(), cur);
            double lo = below == levels.begin() ? 0.0 : *std::prev(below);
            double hi = above == levels.end() ? std::max(cur, prep.maxFutDemand[p]) : *above;
            if (hi - lo < 1e-12) continue;
            auto objAt = [&](double x) {
                std::vector<double> trial = best;
                trial[p] = x;
                double shed = 0.0;
                double obj = prep.eval(trial, kw, supply, shed);
                return shed <= g.budget + feasTol ? obj : kInf;
            };
            double a = lo, b = hi;
            double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
            double f1 = objAt(x1), f2 = objAt(x2);
            for (int it = 0; it < 48 && b - a > 1e-10; ++it) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - golden * (b - a);
                    f1 = objAt(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + golden * (b - a);
                    f2 = objAt(x2);
                }
            }
            double xBest = f1 <= f2 ? x1 : x2;
            double fBest = std::min(f1, f2);
            if (fBest < bestObj - 1e-12 * std::max(1.0, std::fabs(bestObj))) {
                best[p] = xBest;
                bestObj = fBest;
                improved = true;
            }
        }
        if (!improved) break;
    }

    lift_bounds(g, prep, best, bestObj);
    return make_solution(g, prep, best,
                         g.budget == 0.0 ? SolveStatus::Optimal : SolveStatus::Feasible);
}

Solution local_search(const pe::GroundInstance& g, const Solution& seed,
                      const SolverConfig& config) {
    Prepared prep(g);
    std::vector<double> current = bounds_vector(g, seed);
    std::vector<double> kw, supply;
    double shed = 0.0;
    double curObj = prep.eval(current, kw, supply, shed);
    if (shed > g.budget + feas_allow(g.budget))
        throw SolverError(SolverError::Kind::InfeasibleSeed,
                          "seed sheds " + std::to_string(shed) + " against budget " +
                              std::to_string(g.budget));

    for (int sweep = 0; sweep < config.refinementIters; ++sweep) {
        double bestObj = curObj;
        int bestP = -1;
        double bestLevel = 0.0;
        for (int p = 0; p < prep.P; ++p) {
            const auto& demands = prep.demandsByPeriod[p];
            std::vector<double> moves;
            auto below = std::lower_bound(demands.begin(), demands.end(), current[p]);
            if (below != demands.begin()) moves.push_back(*std::prev(below));
            auto above = std::upper_bound(demands.begin(), demands.end(), current[p]);
            if (above != demands.end()) moves.push_back(*above);
            moves.push_back(prep.maxFutDemand[p]);
            if (g.hasMeter) {
                double remaining = g.budget - (shed - prep.period_shed(p, current[p]));
                moves.push_back(prep.water_level(p, remaining));
            }
            for (double level : moves) {
                if (level == current[p]) continue;
                std::vector<double> trial = current;
                trial[p] = level;
                double trialShed = 0.0;
                double obj = prep.eval(trial, kw, supply, trialShed);
                if (trialShed > g.budget + feas_allow(g.budget)) continue;
                if (obj < bestObj - 1e-12 * std::max(1.0, std::fabs(bestObj))) {
                    bestObj = obj;
                    bestP = p;
                    bestLevel = level;
                }
            }
        }
        if (bestP < 0) break;
        current[bestP] = bestLevel;
        curObj = prep.eval(current, kw, supply, shed);
    }

    lift_bounds(g, prep, current, curObj);
    return make_solution(g, prep, current, SolveStatus::Feasible);
}

Solution brute_force_oracle(const pe::GroundInstance& g, double gridStep) {
    if (gridStep <= 0)
        throw SolverError(SolverError::Kind::GridTooLarge, "gridStep must be positive");
    Prepared prep(g);
    const int P = prep.P;
    const double maxDemand = g.max_demand();

    int n = static_cast<int>(std::ceil(maxDemand / gridStep - 1e-9));
    while (n * gridStep < maxDemand) ++n;
    const int levelCount = n + 1;

    long double gridSize = 1;
    for (int p = 0; p < P; ++p) gridSize *= levelCount;
    if (gridSize > kOracleGridCap)
        throw SolverError(SolverError::Kind::GridTooLarge,
                          "grid of " + std::to_string((double)gridSize) +
                              " candidates exceeds the oracle cap");

    std::vector<double> levels(levelCount);
    for (int k = 0; k < levelCount; ++k) levels[k] = k * gridStep;

    // Per-period tables: shed energy per level, and for each (target,
    // source) period pair the largest row contribution per level.
    std::vector<std::vector<double>> shedTab(P, std::vector<double>(levelCount, 0.0));
    for (int i = 0; i < prep.Tf; ++i) {
        int q = prep.futPeriod[i];
        double d = prep.futDemand[i];
        for (int k = 0; k < levelCount; ++k)
            if (d > levels[k]) shedTab[q][k] += (d - levels[k]) * g.timeIntervalSize;
    }
    std::vector<std::vector<double>> maxTab(static_cast<std::size_t>(P) * P);
    for (const auto& row : prep.rows) {
        int q = prep.futPeriod[row.fut];
        auto& tab = maxTab[static_cast<std::size_t>(row.p) * P + q];
        if (tab.empty()) tab.assign(levelCount, 0.0);
        double d = prep.futDemand[row.fut];
        for (int k = 0; k < levelCount; ++k) {
            double v = row.coef * std::min(d, levels[k]);
            if (v > tab[k]) tab[k] = v;
        }
    }

    const double feasTol = feas_allow(g.budget);
    std::vector<int> ks(P, 0), bestKs;
    double bestObj = kInf;
    // lower[depth][p]: accumulated supply floor after choosing levels for
    // periods 0..depth-1.
    std::vector<std::vector<double>> lower(P + 1, std::vector<double>(P, 0.0));
    lower[0] = prep.constLower;
    std::vector<double> shedAcc(P + 1, 0.0);

    // Depth-first scan in ascending lexicographic order; infeasible level
    // prefixes are skipped (shed decreases as levels rise).
    auto firstFeasible = [&](int q, double remaining) {
        const auto& tab = shedTab[q];
        int lo = 0, hi = levelCount;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (tab[mid] <= remaining + feasTol)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };

    int depth = 0;
    ks[0] = firstFeasible(0, g.budget - shedAcc[0]);
    while (depth >= 0) {
        if (ks[depth] >= levelCount) {
            --depth;
            if (depth >= 0) ++ks[depth];
            continue;
        }
        int k = ks[depth];
        shedAcc[depth + 1] = shedAcc[depth] + shedTab[depth][k];
        for (int p = 0; p < P; ++p) {
            const auto& tab = maxTab[static_cast<std::size_t>(p) * P + depth];
            double v = lower[depth][p];
            if (!tab.empty() && tab[k] > v) v = tab[k];
            lower[depth + 1][p] = v;
        }
        if (depth + 1 == P) {
            double total = 0.0;
            for (int p = 0; p < P; ++p)
                total += std::max(lower[P][p], levels[ks[p]]);
            double obj = g.rate * total;
            if (obj <= bestObj) {
                bestObj = obj;
                bestKs = ks;
            }
            ++ks[depth];
        } else {
            ++depth;
            ks[depth] = firstFeasible(depth, g.budget - shedAcc[depth]);
        }
    }

    std::vector<double> bounds(P);
    for (int p = 0; p < P; ++p) bounds[p] = levels[bestKs[p]];
    return make_solution(g, prep, bounds, SolveStatus::Feasible);
}

CheckReport check_solution(const pe::GroundInstance& g, const Solution& s, double tol) {
    CheckReport report;
    auto allow = [&](double a, double b) {
        return std::max(1e-9, tol * std::max({1.0, std::fabs(a), std::fabs(b)}));
    };
    auto boundAt = [&](PeriodIndex p) -> const double* {
        auto it = s.bounds.find(p);
        return it == s.bounds.end() ? nullptr : &it->second;
    };
    auto supplyAt = [&](PeriodIndex p) -> const double* {
        auto it = s.supply.find(p);
        return it == s.supply.end() ? nullptr : &it->second;
    };
    auto meterAt = [&](TimeIndex t) -> const double* {
        auto it = s.meter.find(t);
        return it == s.meter.end() ? nullptr : &it->second;
    };

    for (PeriodIndex p : g.futurePeriods) {
        const double* bound = boundAt(p);
        const double* supply = supplyAt(p);
        if (!bound || !supply) {
            report.violations.push_back({"missingParameter", std::nullopt, p, 0.0});
            continue;
        }
        if (g.boundNonnegative && *bound < -allow(*bound, 0.0))
            report.violations.push_back({"boundNonNegative", std::nullopt, p, *bound});
        if (g.boundLeSupply && *bound > *supply + allow(*bound, *supply))
            report.violations.push_back(
                {"boundWithinSupply", std::nullopt, p, *supply - *bound});
    }

    if (g.hasMeter) {
        for (TimeIndex t : g.pastTimes) {
            const double* kw = meterAt(t);
            double d = g.demand_at(t);
            if (!kw) {
                report.violations.push_back({"missingParameter", t, std::nullopt, 0.0});
                continue;
            }
            if (std::fabs(*kw - d) > allow(*kw, d))
                report.violations.push_back({"meterHistory", t, std::nullopt, d - *kw});
        }
        double shed = 0.0;
        bool shedComplete = true;
        for (const auto& rec : g.minRecords) {
            PeriodIndex p = g.futurePeriods[rec.periodIdx];
            const double* kw = meterAt(rec.time);
            const double* bound = boundAt(p);
            if (!kw || !bound) {
                report.violations.push_back({"missingParameter", rec.time, p, 0.0});
                shedComplete = false;
                continue;
            }
            double want = std::min(rec.demand, *bound);
            if (std::fabs(*kw - want) > allow(*kw, want))
                report.violations.push_back(
                    {"meterMinOfDemandAndBound", rec.time, p, want - *kw});
            shed += (rec.demand - *kw) * g.timeIntervalSize;
        }
        if (shedComplete && shed > g.budget + allow(shed, g.budget))
            report.violations.push_back(
                {"interruptionBudget", std::nullopt, std::nullopt, g.budget - shed});
    }

    for (const auto& row : g.supplyRows) {
        PeriodIndex p = g.futurePeriods[row.periodIdx];
        const double* supply = supplyAt(p);
        if (!supply) continue;  // already reported
        double value;
        if (row.onMeter) {
            const double* kw = meterAt(row.time);
            if (!kw) continue;
            value = row.coef * *kw;
        } else {
            value = row.coef * g.demand_at(row.time);
        }
        if (*supply < value - allow(*supply, value)) {
            std::string name = "supplyFloor";
            if (row.constraintIdx >= 0 &&
                row.constraintIdx < static_cast<int>(g.source.globals.size())) {
                const auto& constraint = g.source.globals[row.constraintIdx];
                if (std::holds_alternative<pe::ImplicationConstraint>(constraint))
                    name = std::get<pe::ImplicationConstraint>(constraint).name;
            }
            report.violations.push_back({name, row.time, p, *supply - value});
        }
    }

    return report;
}

std::string solution_to_json(const Solution& s) {
    nlohmann::json j;
    j["status"] = std::string(status_name(s.status));
    j["objective"] = s.objective;
    j["shedTotal"] = s.shedTotal;
    j["bounds"] = nlohmann::json::array();
    for (const auto& [p, v] : s.bounds) j["bounds"].push_back({{"period", p}, {"value", v}});
    j["ppsd"] = nlohmann::json::array();
    for (const auto& [p, v] : s.supply) j["ppsd"].push_back({{"period", p}, {"value", v}});
    return j.dump(2);
}

}  // namespace mtsa::solver
