#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/pe/ground.hpp"

namespace mtsa::solver {

class SolverError : public Error {
public:
    enum class Kind {
        DimensionMismatch,
        NonzeroBudget,
        ComboLimitExceeded,
        InfeasibleSeed,
        GridTooLarge,
    };

    SolverError(Kind kind, const std::string& message)
        : Error("solver error: " + message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class SolveStatus { Optimal, Feasible, Infeasible };

std::string_view status_name(SolveStatus status);

struct Solution {
    std::map<PeriodIndex, double> bounds;
    std::map<PeriodIndex, double> supply;  // payPeriodSupplyDemand
    std::map<TimeIndex, double> meter;     // kW
    double objective = 0.0;
    double shedTotal = 0.0;  // interrupted energy over the future horizon
    SolveStatus status = SolveStatus::Feasible;
};

struct Violation {
    std::string constraint;
    std::optional<TimeIndex> time;
    std::optional<PeriodIndex> period;
    double slack = 0.0;  // negative by how much the constraint is missed
};

struct Evaluation {
    std::map<PeriodIndex, double> supply;
    std::map<TimeIndex, double> meter;
    double objective = 0.0;
    double shedTotal = 0.0;
    bool feasible = false;
    std::vector<Violation> violations;
};

// Deterministic propagation: derives kW, the minimal feasible supply values,
// the shed energy, and the objective for a given bound vector (one entry per
// future period, in period order).
Evaluation evaluate(const pe::GroundInstance& g, std::span<const double> bounds);

// Exact closed form for a zero interruption budget.
Solution solve_zero_budget(const pe::GroundInstance& g);

// Exhaustive search over per-period candidate levels (distinct demands plus
// budget water-fill levels) with coordinate-wise golden-section refinement.
Solution solve_breakpoints(const pe::GroundInstance& g, const SolverConfig& config);

// Single-period perturbation descent from a feasible seed.
Solution local_search(const pe::GroundInstance& g, const Solution& seed,
                      const SolverConfig& config);

// Dense-grid reference search over [0, maxDemand]^periods; ties resolve to
// the lexicographically largest bound vector.
Solution brute_force_oracle(const pe::GroundInstance& g, double gridStep);

struct CheckReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Verifies every ground constraint plus the budget at relative tolerance.
CheckReport check_solution(const pe::GroundInstance& g, const Solution& s, double tol);

std::string solution_to_json(const Solution& s);

}  // namespace mtsa::solver
