#include "doctest.h"
#include "mtsa/pe/emit.hpp"
#include "mtsa/pe/ground.hpp"
#include "support/fixtures.hpp"

using namespace mtsa;
using namespace mtsa::pe;

TEST_CASE("grounding the fixture expands the expected variables and rows") {
    GroundInstance g = fixtures::tiny_ground(0.0);

    CHECK(g.futurePeriods == std::vector<PeriodIndex>{1, 2});
    CHECK(g.meterVarCount() == 7);
    CHECK(g.pastTimes == std::vector<TimeIndex>{-2, -1, 0});
    CHECK(g.futureTimes == std::vector<TimeIndex>{1, 2, 3, 4});
    CHECK(g.minRecords.size() == 4);
    CHECK(g.hasMeter);
    CHECK(g.boundLeSupply);
    CHECK(g.boundNonnegative);
    CHECK(g.budget == 0.0);
    CHECK(g.rate == 8.124);
    CHECK(ci_equal(g.boundParam, "PeakDemandBound"));
    CHECK(ci_equal(g.supplyParam, "PayPeriodSupplyDemand"));
    CHECK(ci_equal(g.meterParam, "KW"));

    // current-month rows: one per future interval; preceding-month rows:
    // three historical intervals for p=1, those three plus the two p=1
    // intervals for p=2.
    int currentMonth = 0, preceding = 0;
    for (const auto& row : g.supplyRows) {
        if (row.constraintIdx == 0) ++currentMonth;
        if (row.constraintIdx == 1) ++preceding;
        CHECK(row.onMeter);
    }
    CHECK(currentMonth == 4);
    CHECK(preceding == 8);
    CHECK(g.supplyRows.size() == 12);
}

TEST_CASE("grounding errors") {
    SUBCASE("no future periods") {
        DataStore store;
        for (TimeIndex t = -3; t <= 0; ++t) store.calendar.set(t, {0, 2012, 7, 1, 11, 2});
        TimeSeries demand("ElectricPowerDemand");
        for (TimeIndex t = -3; t <= 0; ++t) demand.set(t, 5.0);
        store.series[demand.name()] = demand;
        try {
            pe::ground(fixtures::learn_instance(), store, SolverConfig{});
            FAIL("expected GroundError");
        } catch (const GroundError& e) {
            CHECK(e.kind() == GroundError::Kind::CalendarGap);
        }
    }
    SUBCASE("missing demand series") {
        DataStore store;
        store.calendar = fixtures::tiny_calendar();
        try {
            pe::ground(fixtures::learn_instance(), store, SolverConfig{});
            FAIL("expected GroundError");
        } catch (const GroundError& e) {
            CHECK(e.kind() == GroundError::Kind::MissingSeries);
        }
    }
    SUBCASE("series value missing at one interval") {
        DataStore store = fixtures::tiny_store();
        TimeSeries partial("ElectricPowerDemand");
        partial.set(1, 10.0);
        store.series["ElectricPowerDemand"] = partial;
        CHECK_THROWS_AS(pe::ground(fixtures::learn_instance(), store, SolverConfig{}),
                        GroundError);
    }
}

TEST_CASE("weekend-only calendars produce no contract rows") {
    DataStore store = fixtures::tiny_store();
    CalendarTable weekend;
    for (const auto& [t, row] : store.calendar.rows()) {
        CalendarRow r = row;
        r.weekDay = 0;
        weekend.set(t, r);
    }
    store.calendar = weekend;
    SolverConfig config;
    GroundInstance g = pe::ground(fixtures::learn_instance(), store, config);
    CHECK(g.supplyRows.empty());
    CHECK(g.minRecords.size() == 4);  // the meter structure is unaffected
}

TEST_CASE("OPL export carries the reference model text") {
    SolverConfig config;
    config.annualBound = 0.0;
    config.horizonYears = 2;
    DataStore store = fixtures::tiny_store();
    GroundInstance g = pe::ground(fixtures::learn_instance(), store, config);
    OplExport opl = emit_opl(g);

    CHECK(opl.model.find("minimize totalCharge;") != std::string::npos);
    CHECK(opl.model.find("8.124 * payPeriodSupplyDemand[p]") != std::string::npos);
    CHECK(opl.model.find("pwlFunction kWfunction") != std::string::npos);
    CHECK(opl.model.find("<= annualBound * 2") != std::string::npos);

    for (const char* name :
         {"timeIntervalSize", "nbPayPeriods", "annualBound", "powerInterval",
          "PowerIntervals", "electricPowerDemand", "PayPeriods", "peakDemandBound",
          "payPeriodSupplyDemand"})
        CHECK(opl.model.find(name) != std::string::npos);

    // six constraint groups
    CHECK(opl.model.find("forall(i in PowerIntervals : i.pInterval <= 0)") !=
          std::string::npos);
    CHECK(opl.model.find("kWfunction[i](peakDemandBound[i.payPeriod])") != std::string::npos);
    CHECK(opl.model.find("forall (p in PayPeriods) peakDemandBound[p] <= "
                         "payPeriodSupplyDemand[p];") != std::string::npos);
    std::size_t groundedBlocks = 0;
    for (std::size_t pos = 0;
         (pos = opl.model.find("forall(p in PayPeriods)\n", pos)) != std::string::npos;
         ++pos)
        ++groundedBlocks;
    CHECK(groundedBlocks == 2);
    CHECK(opl.model.find("sum(i in PowerIntervals : i.pInterval >= 1)") != std::string::npos);
    // the month window renders as a disjunction, not the conjoined form
    CHECK(opl.model.find("i.month <= 5 || i.month >= 10") != std::string::npos);

    CHECK(opl.data.find("nbPayPeriods = 2;") != std::string::npos);
    CHECK(opl.data.find("<-2, 0, 2012, 7, 3, 11, 2>") != std::string::npos);
    CHECK(opl.data.find("timeIntervalSize = 1;") != std::string::npos);
}

TEST_CASE("MILP export encodes the meter with one binary per future interval") {
    GroundInstance g = fixtures::tiny_ground(0.0);
    std::string lp = emit_milp(g, default_big_m(g));

    CHECK(default_big_m(g) == 14.0);
    CHECK(lp.find("Minimize") != std::string::npos);
    CHECK(lp.find("Subject To") != std::string::npos);
    CHECK(lp.find("Bounds") != std::string::npos);
    CHECK(lp.find("Binaries") != std::string::npos);

    std::size_t binaries = 0;
    std::size_t binariesAt = lp.find("Binaries");
    for (std::size_t pos = binariesAt;
         (pos = lp.find("z_t", pos)) != std::string::npos; ++pos)
        ++binaries;
    CHECK(binaries == 4);

    // historical meter values are pinned in the bounds section
    CHECK(lp.find("kw_tm2 = 10") != std::string::npos);
    CHECK(lp.find("kw_tm1 = 8") != std::string::npos);
    CHECK(lp.find("kw_t0 = 12") != std::string::npos);

    SUBCASE("a big-M below the maximum demand is rejected") {
        CHECK_THROWS_AS(emit_milp(g, 1.0), EmitError);
        CHECK_NOTHROW(emit_milp(g, 14.0));  // boundary accepted
    }
}
