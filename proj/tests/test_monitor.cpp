#include <sstream>

#include "doctest.h"
#include "mtsa/csv.hpp"
#include "mtsa/monitor/monitor.hpp"
#include "mtsa/solver/solver.hpp"
#include "support/fixtures.hpp"

using namespace mtsa;
using namespace mtsa::monitor;

namespace {

constexpr const char* kActionText =
    "The Electric Power Demand Greater Than The Peak Demand Bound. The Electric Load "
    "Shedding Is Recommended.";

pe::Catalog monitoring_catalog() {
    pe::Catalog catalog = fixtures::learn_catalog();
    for (const auto& stmt : sql::parse_script(scripts::kPeakDemandMonitorScript))
        catalog.add(stmt);
    return catalog;
}

DecisionParameterTable tiny_bounds() {
    DecisionParameterTable table("PeakDemandBound", ParamKeying::PerPeriod);
    table.set(1, 14.0);
    table.set(2, 12.6);
    return table;
}

// One 720-interval billing period with a single learned threshold.
CalendarTable month_calendar() {
    CalendarTable cal;
    for (TimeIndex t = 1; t <= 720; ++t)
        cal.set(t, {1, 2012, 7, 1 + (t - 1) / 24, (t - 1) % 24, 2});
    return cal;
}

}  // namespace

TEST_CASE("rule compilation resolves the recommendation chain") {
    pe::Catalog catalog = monitoring_catalog();
    MonitoringRule rule = compile_monitor("ELS_Monitoring_Recommendation", catalog,
                                          tiny_bounds(), fixtures::tiny_calendar());
    CHECK(ci_equal(rule.seriesName, "ElectricPowerDemand"));
    CHECK(rule.guardOp == sql::CmpOp::Gt);
    CHECK(rule.actionText == kActionText);

    SUBCASE("monitoring the indicator view directly carries no action text") {
        MonitoringRule bare = compile_monitor("ElectricLoadShedding", catalog, tiny_bounds(),
                                              fixtures::tiny_calendar());
        CHECK(bare.actionText.empty());
    }
    SUBCASE("views without an Indicator column are rejected") {
        pe::Catalog broken = catalog;
        broken.add(sql::parse_statement(
            "CREATE VIEW Odd AS (SELECT EPD.time, (CASE WHEN EPD.value > PDB.value THEN "
            "'1' ELSE '0' END) AS Flag FROM ElectricPowerDemand EPD, PeakDemandBound PDB "
            "WHERE EPD.time = PDB.time);"));
        try {
            compile_monitor("Odd", broken, tiny_bounds(), fixtures::tiny_calendar());
            FAIL("expected MonitorError");
        } catch (const MonitorError& e) {
            CHECK(e.kind() == MonitorError::Kind::UnsupportedViewShape);
        }
    }
    SUBCASE("the parameter table must cover every future period") {
        DecisionParameterTable partial("PeakDemandBound", ParamKeying::PerPeriod);
        partial.set(2, 12.6);  // period 1 missing
        try {
            compile_monitor("ELS_Monitoring_Recommendation", catalog, partial,
                            fixtures::tiny_calendar());
            FAIL("expected MonitorError");
        } catch (const MonitorError& e) {
            CHECK(e.kind() == MonitorError::Kind::MissingParameter);
        }
    }
}

TEST_CASE("single-step evaluation against the learned threshold") {
    pe::Catalog catalog = monitoring_catalog();
    DecisionParameterTable bounds("PeakDemandBound", ParamKeying::PerPeriod);
    bounds.set(1, 17211.0);
    MonitoringRule rule =
        compile_monitor("ELS_Monitoring_Recommendation", catalog, bounds, month_calendar());

    SUBCASE("exceedance fires with the action text") {
        Recommendation rec = step(rule, {250, 17500.0});
        CHECK(rec.indicator == 1);
        REQUIRE(rec.action.has_value());
        CHECK(*rec.action == kActionText);
        CHECK(rec.threshold == 17211.0);
    }
    SUBCASE("the guard is strict at the boundary") {
        Recommendation rec = step(rule, {250, 17211.0});
        CHECK(rec.indicator == 0);
        CHECK_FALSE(rec.action.has_value());
    }
    SUBCASE("zero demand does not fire") {
        CHECK(step(rule, {250, 0.0}).indicator == 0);
    }
    SUBCASE("records outside the calendar are rejected") {
        try {
            step(rule, {5000, 1.0});
            FAIL("expected MonitorError");
        } catch (const MonitorError& e) {
            CHECK(e.kind() == MonitorError::Kind::OutOfRange);
        }
    }
}

TEST_CASE("replay over a month of records") {
    pe::Catalog catalog = monitoring_catalog();
    DecisionParameterTable bounds("PeakDemandBound", ParamKeying::PerPeriod);
    bounds.set(1, 17211.0);
    MonitoringRule rule =
        compile_monitor("ELS_Monitoring_Recommendation", catalog, bounds, month_calendar());

    std::vector<StreamRecord> stream;
    for (TimeIndex t = 1; t <= 720; ++t) {
        double value = 16200.0 + (t % 97) * 10.0;  // stays below the threshold
        if (t == 101 || t == 310 || t == 555) value = 17500.0;
        stream.push_back({t, value});
    }

    SUBCASE("exactly the exceedances fire") {
        std::ostringstream log;
        auto recs = replay(rule, stream, &log);
        REQUIRE(recs.size() == 720);
        int fired = 0;
        for (const auto& rec : recs)
            if (rec.indicator == 1) {
                ++fired;
                REQUIRE(rec.action.has_value());
                CHECK(*rec.action == kActionText);
            }
        CHECK(fired == 3);

        // one JSON line per record, action only on fired ones
        std::string logged = log.str();
        CHECK(std::count(logged.begin(), logged.end(), '\n') == 720);
        std::size_t actions = 0;
        for (std::size_t pos = 0;
             (pos = logged.find("\"action\"", pos)) != std::string::npos; ++pos)
            ++actions;
        CHECK(actions == 3);
    }
    SUBCASE("an empty stream produces an empty log") {
        std::ostringstream log;
        CHECK(replay(rule, {}, &log).empty());
        CHECK(log.str().empty());
    }
    SUBCASE("replay is deterministic") {
        std::ostringstream first, second;
        replay(rule, stream, &first);
        replay(rule, stream, &second);
        CHECK(first.str() == second.str());
    }
    SUBCASE("out-of-order records are rejected") {
        std::vector<StreamRecord> bad = {{5, 1.0}, {4, 1.0}};
        try {
            replay(rule, bad);
            FAIL("expected MonitorError");
        } catch (const MonitorError& e) {
            CHECK(e.kind() == MonitorError::Kind::UnorderedStream);
        }
    }
}

TEST_CASE("replaying training demand of a zero-budget solve fires nothing") {
    pe::GroundInstance g = fixtures::tiny_ground(0.0);
    solver::Solution solution = solver::solve_zero_budget(g);

    DecisionParameterTable bounds("PeakDemandBound", ParamKeying::PerPeriod);
    for (const auto& [p, v] : solution.bounds) bounds.set(p, v);

    pe::Catalog catalog = monitoring_catalog();
    MonitoringRule rule = compile_monitor("ELS_Monitoring_Recommendation", catalog, bounds,
                                          fixtures::tiny_calendar());

    std::vector<StreamRecord> stream;
    TimeSeries demand = fixtures::tiny_demand();
    for (TimeIndex t = 1; t <= 4; ++t) stream.push_back({t, demand.at(t)});
    auto recs = replay(rule, stream);
    for (const auto& rec : recs) CHECK(rec.indicator == 0);
}

TEST_CASE("stream text parsing") {
    auto records = parse_stream("time,value\n1,10.5\n2,11\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].time == 1);
    CHECK(records[0].value == 10.5);

    auto bare = parse_stream("3,7.25\n4,8\n");
    REQUIRE(bare.size() == 2);
    CHECK(bare[0].time == 3);

    CHECK_THROWS_AS(parse_stream("1;10\n"), CsvError);
    CHECK_THROWS_AS(parse_stream("x,10\n"), CsvError);
}
