#include "mtsa/pe/ground.hpp"

#include <algorithm>
#include <set>

namespace mtsa::pe {

namespace {

using sql::CmpOp;

[[noreturn]] void fail(GroundError::Kind kind, const std::string& message) {
    throw GroundError(kind, message);
}

bool is_period_binding(const Formula& f) {
    if (f.kind != Formula::Kind::Atom) return false;
    const Atom& a = *f.atom;
    auto plain = [](const Term& t, Term::Kind kind) {
        return t.kind == kind && t.scale == 1.0 && t.offset == 0.0;
    };
    auto series = [&](const Term& t) {
        return plain(t, Term::Kind::Series) && ci_equal(t.name, "payPeriod");
    };
    if (a.op != CmpOp::Eq) return false;
    return (series(a.lhs) && plain(a.rhs, Term::Kind::PeriodVar)) ||
           (series(a.rhs) && plain(a.lhs, Term::Kind::PeriodVar));
}

bool term_is_param_free(const Term& t) { return t.kind != Term::Kind::Param; }

bool formula_is_param_free(const Formula& f) {
    if (f.kind == Formula::Kind::Atom)
        return term_is_param_free(f.atom->lhs) && term_is_param_free(f.atom->rhs);
    return std::all_of(f.children.begin(), f.children.end(), formula_is_param_free);
}

void collect_series_names(const Formula& f, std::set<std::string, CiLess>& out) {
    if (f.kind == Formula::Kind::Atom) {
        for (const Term* t : {&f.atom->lhs, &f.atom->rhs})
            if (t->kind == Term::Kind::Series && !calendar_attribute(t->name))
                out.insert(t->name);
        return;
    }
    for (const auto& child : f.children) collect_series_names(child, out);
}

// Splits an implication guard into the optional payPeriod(t) == p binding
// and the remaining condition.
struct GuardParts {
    bool hasBinding = false;
    Formula rest;  // empty And means TRUE
};

GuardParts split_guard(const Formula& guard) {
    GuardParts parts;
    parts.rest.kind = Formula::Kind::And;
    auto consume = [&](const Formula& f) {
        if (is_period_binding(f) && !parts.hasBinding)
            parts.hasBinding = true;
        else
            parts.rest.children.push_back(f);
    };
    if (guard.kind == Formula::Kind::And)
        for (const auto& child : guard.children) consume(child);
    else
        consume(guard);
    return parts;
}

bool plain_param(const Term& t, ParamKeying keying) {
    return t.kind == Term::Kind::Param && t.paramKey == keying && t.scale == 1.0 &&
           t.offset == 0.0;
}

bool plain_series(const Term& t) {
    return t.kind == Term::Kind::Series && !calendar_attribute(t.name) && t.scale == 1.0 &&
           t.offset == 0.0;
}

struct MeterShape {
    std::string demandSeries;
    std::string boundParam;
    std::string meterParam;
};

// Finds the series-vs-bound comparison in a guard and normalizes it so the
// series sits on the left.
std::optional<CmpOp> guard_event_op(const Formula& f) {
    if (f.kind == Formula::Kind::Atom) {
        const Atom& a = *f.atom;
        if (plain_series(a.lhs) && a.rhs.kind == Term::Kind::Param) return a.op;
        if (plain_series(a.rhs) && a.lhs.kind == Term::Kind::Param) {
            switch (a.op) {
                case CmpOp::Lt: return CmpOp::Gt;
                case CmpOp::Le: return CmpOp::Ge;
                case CmpOp::Gt: return CmpOp::Lt;
                case CmpOp::Ge: return CmpOp::Le;
                default: return a.op;
            }
        }
        return std::nullopt;
    }
    for (const auto& child : f.children)
        if (auto op = guard_event_op(child)) return op;
    return std::nullopt;
}

// The monitoring pair encodes kW = min(demand, bound): one implication fires
// on exceedance and pins kW to the bound, the complementary one pins kW to
// the demand.
MeterShape detect_meter(const std::vector<Constraint>& monitors) {
    if (monitors.size() != 2)
        fail(GroundError::Kind::UnsupportedShape,
             "expected exactly two monitoring constraints, got " +
                 std::to_string(monitors.size()));

    MeterShape shape;
    std::optional<CmpOp> exceedOp;
    std::optional<CmpOp> holdOp;

    for (const auto& constraint : monitors) {
        if (!std::holds_alternative<ImplicationConstraint>(constraint))
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring constraints must be implications");
        const auto& impl = std::get<ImplicationConstraint>(constraint);
        const Atom& c = impl.consequent;
        if (c.op != CmpOp::Eq)
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring consequent of " + impl.name + " must be an equality");

        const Term* meter = nullptr;
        const Term* other = nullptr;
        for (const Term* t : {&c.lhs, &c.rhs})
            if (plain_param(*t, ParamKeying::PerInterval)) meter = t;
        for (const Term* t : {&c.lhs, &c.rhs})
            if (t != meter) other = t;
        if (!meter)
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring consequent of " + impl.name +
                     " does not assign a per-interval parameter");
        if (!shape.meterParam.empty() && !ci_equal(shape.meterParam, meter->name))
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring constraints assign different meter parameters");
        shape.meterParam = meter->name;

        std::optional<CmpOp> op = guard_event_op(impl.guard);
        if (!op)
            fail(GroundError::Kind::UnsupportedShape,
                 "guard of " + impl.name + " does not compare the series to the bound");

        if (plain_param(*other, ParamKeying::PerPeriod)) {
            shape.boundParam = other->name;
            exceedOp = op;
        } else if (plain_series(*other)) {
            if (!shape.demandSeries.empty() && !ci_equal(shape.demandSeries, other->name))
                fail(GroundError::Kind::UnsupportedShape,
                     "monitoring constraints reference different input series");
            shape.demandSeries = other->name;
            holdOp = op;
        } else {
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring consequent of " + impl.name + " has an unsupported shape");
        }
    }

    if (!exceedOp || !holdOp)
        fail(GroundError::Kind::UnsupportedShape,
             "monitoring constraints do not form an exceed/hold pair");
    bool complementary = (*exceedOp == CmpOp::Gt && *holdOp == CmpOp::Le) ||
                         (*exceedOp == CmpOp::Ge && *holdOp == CmpOp::Lt);
    if (!complementary)
        fail(GroundError::Kind::UnsupportedShape,
             "exceed/hold guards are not complementary comparisons");
    return shape;
}

}  // namespace

int GroundInstance::period_index(PeriodIndex p) const {
    auto it = std::lower_bound(futurePeriods.begin(), futurePeriods.end(), p);
    if (it == futurePeriods.end() || *it != p) return -1;
    return static_cast<int>(it - futurePeriods.begin());
}

int GroundInstance::period_index_of_time(TimeIndex t) const {
    if (t <= 0) return -1;
    return period_index(calendar.row(t).payPeriod);
}

double GroundInstance::max_demand() const {
    double best = 0.0;
    for (double d : demand) best = std::max(best, d);
    return best;
}

GroundInstance ground(const PEInstance& instance, const DataStore& store,
                      const SolverConfig& config) {
    if (config.annualBound < 0)
        fail(GroundError::Kind::BadConfig, "annualBound must be nonnegative");
    if (config.timeIntervalSize <= 0)
        fail(GroundError::Kind::BadConfig, "timeIntervalSize must be positive");
    if (config.horizonYears < 1)
        fail(GroundError::Kind::BadConfig, "horizonYears must be at least 1");
    if (!instance.objective.minimize)
        fail(GroundError::Kind::UnsupportedShape,
             "maximization is unbounded for this model family");

    GroundInstance g;
    g.calendar = store.calendar;
    if (g.calendar.empty()) fail(GroundError::Kind::CalendarGap, "calendar is empty");
    {
        ValidationReport report = validate_calendar(g.calendar);
        if (!report.ok())
            fail(GroundError::Kind::CalendarGap,
                 "calendar invalid: " + report.issues.front().message);
    }
    g.tMin = g.calendar.tMin();
    g.tMax = g.calendar.tMax();
    g.timeIntervalSize = config.timeIntervalSize;
    g.horizonYears = config.horizonYears;
    g.budget = config.annualBound * config.horizonYears;
    g.rate = instance.objective.rate;
    g.supplyParam = instance.objective.paramSet;
    g.source = instance;

    // Horizon partition and the future period set.
    std::set<PeriodIndex> periods;
    for (const auto& [t, row] : g.calendar.rows()) {
        if (t <= 0) {
            if (row.payPeriod > 0)
                fail(GroundError::Kind::CalendarGap,
                     "past interval " + std::to_string(t) + " is mapped to future period " +
                         std::to_string(row.payPeriod));
            g.pastTimes.push_back(t);
        } else {
            if (row.payPeriod < 1)
                fail(GroundError::Kind::CalendarGap,
                     "future interval " + std::to_string(t) + " is mapped to period " +
                         std::to_string(row.payPeriod));
            g.futureTimes.push_back(t);
            periods.insert(row.payPeriod);
        }
    }
    if (periods.empty())
        fail(GroundError::Kind::CalendarGap, "calendar has no future periods");
    g.futurePeriods.assign(periods.begin(), periods.end());

    // One input series drives the model; find it and densify.
    std::set<std::string, CiLess> seriesNames;
    for (const auto& group : {&instance.globals, &instance.monitors})
        for (const auto& constraint : *group) {
            if (std::holds_alternative<ImplicationConstraint>(constraint)) {
                const auto& impl = std::get<ImplicationConstraint>(constraint);
                collect_series_names(impl.guard, seriesNames);
                collect_series_names(Formula::make(impl.consequent), seriesNames);
            } else {
                collect_series_names(std::get<AtomicConstraint>(constraint).formula,
                                     seriesNames);
            }
        }
    if (seriesNames.size() > 1)
        fail(GroundError::Kind::UnsupportedShape,
             "grounding supports a single input series, got " +
                 std::to_string(seriesNames.size()));
    if (!seriesNames.empty()) g.demandSeries = *seriesNames.begin();

    if (!g.demandSeries.empty()) {
        const TimeSeries* series = store.find_series(g.demandSeries);
        if (!series)
            fail(GroundError::Kind::MissingSeries,
                 "series " + g.demandSeries + " is not loaded");
        g.demand.resize(static_cast<std::size_t>(g.tMax - g.tMin) + 1, 0.0);
        for (const auto& [t, v] : series->values())
            if (t < g.tMin || t > g.tMax)
                fail(GroundError::Kind::MissingSeries,
                     "series " + g.demandSeries + " has value at " + std::to_string(t) +
                         " outside the calendar range");
        for (const auto& [t, row] : g.calendar.rows()) {
            (void)row;
            if (!series->contains(t))
                fail(GroundError::Kind::MissingSeries,
                     "series " + g.demandSeries + " missing value at " + std::to_string(t));
            g.demand[static_cast<std::size_t>(t - g.tMin)] = series->at(t);
        }
    } else {
        g.demand.resize(static_cast<std::size_t>(g.tMax - g.tMin) + 1, 0.0);
    }

    // Monitoring pair -> min structure over future intervals.
    if (!instance.monitors.empty()) {
        MeterShape shape = detect_meter(instance.monitors);
        if (!ci_equal(shape.demandSeries, g.demandSeries))
            fail(GroundError::Kind::UnsupportedShape,
                 "monitoring constraints reference series " + shape.demandSeries +
                     " but the model input is " + g.demandSeries);
        g.hasMeter = true;
        g.boundParam = shape.boundParam;
        g.meterParam = shape.meterParam;
        for (TimeIndex t : g.futureTimes) {
            int idx = g.period_index(g.calendar.row(t).payPeriod);
            g.minRecords.push_back({t, idx, g.demand_at(t)});
        }
    }

    ParamAssignment noParams;  // guards are data-only
    for (std::size_t ci = 0; ci < instance.globals.size(); ++ci) {
        const Constraint& constraint = instance.globals[ci];
        if (std::holds_alternative<AtomicConstraint>(constraint)) {
            const auto& atomic = std::get<AtomicConstraint>(constraint);
            if (atomic.formula.kind != Formula::Kind::Atom)
                fail(GroundError::Kind::UnsupportedShape,
                     "composite plain constraint '" + atomic.name + "' is not supported");
            const Atom& a = *atomic.formula.atom;
            Term lhs = a.lhs;
            Term rhs = a.rhs;
            CmpOp op = a.op;
            if (op == CmpOp::Gt || op == CmpOp::Ge) {
                std::swap(lhs, rhs);
                op = op == CmpOp::Gt ? CmpOp::Lt : CmpOp::Le;
            }
            // Now lhs (op in {<, <=, =}) rhs.
            if (plain_param(lhs, ParamKeying::PerPeriod) &&
                plain_param(rhs, ParamKeying::PerPeriod) && op == CmpOp::Le &&
                ci_equal(rhs.name, g.supplyParam)) {
                if (!g.boundParam.empty() && !ci_equal(lhs.name, g.boundParam))
                    fail(GroundError::Kind::UnsupportedShape,
                         "constraint '" + atomic.name + "' bounds parameter " + lhs.name +
                             ", expected " + g.boundParam);
                g.boundParam = lhs.name;
                g.boundLeSupply = true;
                continue;
            }
            if (lhs.kind == Term::Kind::Constant && lhs.offset == 0.0 && op == CmpOp::Le &&
                plain_param(rhs, ParamKeying::PerPeriod)) {
                if (!g.boundParam.empty() && !ci_equal(rhs.name, g.boundParam))
                    fail(GroundError::Kind::UnsupportedShape,
                         "constraint '" + atomic.name + "' bounds parameter " + rhs.name +
                             ", expected " + g.boundParam);
                g.boundParam = rhs.name;
                g.boundNonnegative = true;
                continue;
            }
            fail(GroundError::Kind::UnsupportedShape,
                 "plain constraint '" + atomic.name + "' has an unsupported shape");
        }

        const auto& impl = std::get<ImplicationConstraint>(constraint);
        if (!formula_is_param_free(impl.guard))
            fail(GroundError::Kind::UnsupportedShape,
                 "guard of global constraint " + impl.name + " references parameters");

        // Normalize the consequent to supply[p] >= coef * (kW | demand).
        Atom c = impl.consequent;
        if (c.op == CmpOp::Le || c.op == CmpOp::Lt) {
            std::swap(c.lhs, c.rhs);
            c.op = c.op == CmpOp::Le ? CmpOp::Ge : CmpOp::Gt;
        }
        if (c.op != CmpOp::Ge)
            fail(GroundError::Kind::UnsupportedShape,
                 "consequent of " + impl.name + " must be a >= inequality");
        if (!plain_param(c.lhs, ParamKeying::PerPeriod) || !ci_equal(c.lhs.name, g.supplyParam))
            fail(GroundError::Kind::UnsupportedShape,
                 "consequent of " + impl.name + " must lower-bound the objective parameter");
        bool onMeter;
        if (c.rhs.kind == Term::Kind::Param && c.rhs.paramKey == ParamKeying::PerInterval &&
            ci_equal(c.rhs.name, g.meterParam) && c.rhs.offset == 0.0) {
            onMeter = true;
        } else if (c.rhs.kind == Term::Kind::Series && !calendar_attribute(c.rhs.name) &&
                   c.rhs.offset == 0.0) {
            onMeter = false;
        } else {
            fail(GroundError::Kind::UnsupportedShape,
                 "consequent of " + impl.name + " must scale the meter or the input series");
        }
        if (c.rhs.scale <= 0.0)
            fail(GroundError::Kind::UnsupportedShape,
                 "consequent of " + impl.name + " needs a positive coefficient");

        GuardParts parts = split_guard(impl.guard);
        auto emit = [&](TimeIndex t, int periodIdx) {
            g.supplyRows.push_back(
                {periodIdx, t, c.rhs.scale, onMeter, static_cast<int>(ci)});
        };
        if (parts.hasBinding) {
            for (const auto& [t, row] : g.calendar.rows()) {
                if (row.payPeriod < 1) continue;
                int idx = g.period_index(row.payPeriod);
                if (idx < 0) continue;
                if (interpret(parts.rest, t, row.payPeriod, store, noParams)) emit(t, idx);
            }
        } else {
            for (std::size_t pi = 0; pi < g.futurePeriods.size(); ++pi) {
                PeriodIndex p = g.futurePeriods[pi];
                for (const auto& [t, row] : g.calendar.rows()) {
                    (void)row;
                    if (interpret(parts.rest, t, p, store, noParams))
                        emit(t, static_cast<int>(pi));
                }
            }
        }
    }

    return g;
}

}  // namespace mtsa::pe
