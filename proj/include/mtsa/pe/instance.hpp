#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/dialect/ast.hpp"

namespace mtsa::pe {

// A term inside a symbolic constraint: scale * base + offset, where the base
// is a constant, the quantified time/period variable, an input series value
// at t, or a decision parameter keyed by t or by the quantified period.
struct Term {
    enum class Kind { Constant, TimeVar, PeriodVar, Series, Param };

    Kind kind = Kind::Constant;
    std::string name;  // series or parameter-set name
    ParamKeying paramKey = ParamKeying::PerInterval;
    double scale = 1.0;
    double offset = 0.0;
};

struct Atom {
    Term lhs;
    sql::CmpOp op = sql::CmpOp::Eq;
    Term rhs;
};

struct Formula {
    enum class Kind { Atom, And, Or };

    Kind kind = Kind::Atom;
    std::optional<Atom> atom;        // when kind == Atom
    std::vector<Formula> children;   // when kind == And/Or; empty And is TRUE

    static Formula make(Atom a) {
        Formula f;
        f.atom = std::move(a);
        return f;
    }
};

// Which bindings a constraint is quantified over.
struct Quantifier {
    bool overTime = true;
    enum class Periods { None, All, Future } periods = Periods::Future;
};

struct AtomicConstraint {
    std::string name;
    Quantifier quantifier;
    Formula formula;
};

struct ImplicationConstraint {
    std::string name;
    Quantifier quantifier;
    Formula guard;
    Atom consequent;
};

using Constraint = std::variant<AtomicConstraint, ImplicationConstraint>;

struct ParameterSet {
    std::string name;
    ParamKeying keying = ParamKeying::PerPeriod;
};

// Sum over future periods of rate * paramSet[p], minimized or maximized.
struct ObjectiveSpec {
    bool minimize = true;
    double rate = 1.0;
    std::string paramSet;
};

struct PEInstance {
    std::vector<std::string> inputSeries;
    std::vector<ParameterSet> parameterSets;
    std::vector<Constraint> globals;   // contract terms, variable bounds
    std::vector<Constraint> monitors;  // event-occurrence constraints
    ObjectiveSpec objective;

    const ParameterSet* find_parameter(std::string_view name) const;
};

// Candidate values for every parameter set, used when interpreting symbolic
// constraints at a concrete binding.
struct ParamAssignment {
    std::map<std::string, std::map<std::int32_t, double>, CiLess> values;

    double at(const std::string& param, std::int32_t key) const;
};

// Truth-value interpretation of a formula at binding (t, p). Series named
// payPeriod/year/month/day/hour/weekDay resolve against the calendar; other
// series resolve against the store.
bool interpret(const Formula& formula, TimeIndex t, PeriodIndex p, const DataStore& store,
               const ParamAssignment& params);
bool interpret(const Constraint& constraint, TimeIndex t, PeriodIndex p,
               const DataStore& store, const ParamAssignment& params);

double term_value(const Term& term, TimeIndex t, PeriodIndex p, const DataStore& store,
                  const ParamAssignment& params);

bool compare(double lhs, sql::CmpOp op, double rhs);

// Canonical calendar attribute name for a table name, if it is one of the
// six calendar-backed tables.
std::optional<std::string> calendar_attribute(std::string_view tableName);

}  // namespace mtsa::pe
