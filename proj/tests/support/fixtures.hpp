#pragma once

#include <random>
#include <string>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/dialect/parser.hpp"
#include "mtsa/pe/compiler.hpp"
#include "mtsa/pe/ground.hpp"
#include "mtsa/scripts.hpp"

namespace fixtures {

using namespace mtsa;

// Seven-interval instance over three pay periods; every row is a summer
// weekday at 11:00, so both contract windows are active everywhere.
inline CalendarTable tiny_calendar() {
    CalendarTable cal;
    auto period = [](TimeIndex t) -> PeriodIndex {
        if (t <= 0) return 0;
        return t <= 2 ? 1 : 2;
    };
    for (TimeIndex t = -2; t <= 4; ++t) cal.set(t, {period(t), 2012, 7, 3, 11, 2});
    return cal;
}

inline TimeSeries tiny_demand() {
    TimeSeries demand("ElectricPowerDemand");
    const std::pair<TimeIndex, double> values[] = {{-2, 10}, {-1, 8}, {0, 12}, {1, 10},
                                                   {2, 14},  {3, 9}, {4, 11}};
    for (auto [t, v] : values) demand.set(t, v);
    return demand;
}

inline DataStore tiny_store() {
    DataStore store;
    store.calendar = tiny_calendar();
    TimeSeries demand = tiny_demand();
    store.series[demand.name()] = demand;
    return store;
}

inline const pe::Catalog& learn_catalog() {
    static const pe::Catalog catalog = [] {
        pe::Catalog c;
        for (const auto& stmt : sql::parse_script(scripts::kPeakDemandLearnScript)) c.add(stmt);
        return c;
    }();
    return catalog;
}

inline const sql::CreateEvent& learn_event() {
    return *learn_catalog().find_event("LearnPeakDemandBoundParameter");
}

inline const pe::PEInstance& learn_instance() {
    static const pe::PEInstance instance = pe::compile_event(learn_event(), learn_catalog());
    return instance;
}

// Budget here is the total interruption energy over the horizon.
inline pe::GroundInstance tiny_ground(double budget) {
    SolverConfig config;
    config.annualBound = budget;
    config.horizonYears = 1;
    DataStore store = tiny_store();
    return pe::ground(learn_instance(), store, config);
}

// Periods of three intervals: t in {1..3} -> 1, {4..6} -> 2, {-2..0} -> 0, ...
inline CalendarTable stepped_calendar(TimeIndex tMin, TimeIndex tMax) {
    CalendarTable cal;
    for (TimeIndex t = tMin; t <= tMax; ++t) {
        PeriodIndex p = static_cast<PeriodIndex>(
            std::floor((static_cast<double>(t) + 2.0) / 3.0));
        cal.set(t, {p, 2012, 7, 3, 11, 2});
    }
    return cal;
}

struct RandomInstance {
    DataStore store;
    pe::GroundInstance ground;
};

// Small randomized instances (at most 3 future periods, 12 intervals) built
// through the real compile + ground path. Calendar attributes vary so the
// contract windows are active on random subsets.
inline RandomInstance random_instance(std::mt19937& rng, double budget,
                                      bool alwaysOnPeak = false) {
    std::uniform_int_distribution<int> periodCount(1, 3);
    std::uniform_int_distribution<int> perPeriod(1, 4);
    std::uniform_int_distribution<int> pastCount(0, 3);
    std::uniform_int_distribution<int> monthDist(1, 12);
    std::uniform_int_distribution<int> weekDayDist(0, 6);
    std::uniform_int_distribution<int> hourDist(0, 23);
    std::uniform_real_distribution<double> demandDist(0.0, 20.0);

    int periods = periodCount(rng);
    std::vector<PeriodIndex> periodOf;  // per future interval
    for (int p = 1; p <= periods; ++p) {
        int count = perPeriod(rng);
        for (int i = 0; i < count && periodOf.size() < 12; ++i)
            periodOf.push_back(p);
    }
    int past = pastCount(rng);

    DataStore store;
    TimeSeries demand("ElectricPowerDemand");
    auto makeRow = [&](PeriodIndex p) {
        CalendarRow row;
        row.payPeriod = p;
        row.year = 2012;
        row.day = 3;
        if (alwaysOnPeak) {
            row.month = 7;
            row.weekDay = 2;
            row.hour = 11;
        } else {
            row.month = monthDist(rng);
            row.weekDay = weekDayDist(rng);
            row.hour = hourDist(rng);
        }
        return row;
    };
    for (TimeIndex t = -past; t <= 0; ++t) store.calendar.set(t, makeRow(0));
    for (std::size_t i = 0; i < periodOf.size(); ++i)
        store.calendar.set(static_cast<TimeIndex>(i + 1), makeRow(periodOf[i]));
    for (const auto& [t, row] : store.calendar.rows()) {
        (void)row;
        demand.set(t, std::round(demandDist(rng) * 100.0) / 100.0);
    }
    store.series[demand.name()] = demand;

    SolverConfig config;
    config.annualBound = budget;
    config.horizonYears = 1;

    RandomInstance out{std::move(store), {}};
    out.ground = pe::ground(learn_instance(), out.store, config);
    return out;
}

}  // namespace fixtures
