// End-to-end acceptance suite: one pass/fail line per criterion, nonzero
// exit when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mtsa/cli/demo.hpp"
#include "mtsa/cli/workspace.hpp"
#include "mtsa/dialect/parser.hpp"
#include "mtsa/dialect/printer.hpp"
#include "mtsa/monitor/monitor.hpp"
#include "mtsa/pe/emit.hpp"
#include "mtsa/solver/solver.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"
#include "support/samples.hpp"

using namespace mtsa;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string label;
    bool pass = true;
    std::string detail;
    double millis = 0.0;

    void require(bool ok, const std::string& message) {
        if (!ok && pass) {
            pass = false;
            detail = message;
        }
    }
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// --- criterion 1: the period map reproduces the reference examples ---------
void run_period_map(Criterion& c) {
    CalendarTable cal = fixtures::stepped_calendar(-8, 9);
    auto start = std::chrono::steady_clock::now();
    c.require(period_of(cal, 2) == 1, "period_of(2) != 1");
    c.require(period_of(cal, 3) == 1, "period_of(3) != 1");
    c.require(period_of(cal, 0) == 0, "period_of(0) != 0");
    c.require(period_of(cal, 8) == 3, "period_of(8) != 3");
    c.require(period_of(cal, -6) == -2, "period_of(-6) != -2");
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
    c.require(ms < 1.0, "lookups took " + std::to_string(ms) + " ms");
}

// --- criterion 2: dialect coverage and round-trip --------------------------
void run_dialect_coverage(Criterion& c) {
    for (std::string_view text : samples::kAll) {
        std::vector<sql::Statement> script;
        try {
            script = sql::parse_script(text);
        } catch (const Error& e) {
            c.require(false, std::string("sample failed to parse: ") + e.what());
            return;
        }
        auto reparsed = sql::parse_script(sql::pretty_print(script));
        c.require(sql::ast_equal(script, reparsed), "round-trip changed a sample");
    }
    auto script = sql::parse_script(samples::kLearnEvent);
    const auto& event = std::get<sql::CreateEvent>(script.at(0));
    c.require(event.withClauses.size() == 6,
              "event has " + std::to_string(event.withClauses.size()) + " clauses, not 6");
    c.require(event.objective.minimize, "objective is not MINIMIZE");
    c.require(ci_equal(event.objective.summed.qualifier, "MESC") &&
                  ci_equal(event.objective.summed.column, "Charge"),
              "objective is not SUM over MESC.Charge");
}

// --- criteria 3 and 4: fixture optima against the reference search ---------
void run_tiny_zero_budget(Criterion& c) {
    pe::GroundInstance g = fixtures::tiny_ground(0.0);
    SolverConfig config;
    config.annualBound = 0.0;
    config.horizonYears = 1;

    solver::Solution closed = solver::solve_zero_budget(g);
    solver::Solution search = solver::solve_breakpoints(g, config);
    for (const solver::Solution* s : {&closed, &search}) {
        c.require(near(s->objective, 216.0984, 1e-6),
                  "objective " + std::to_string(s->objective) + " != 216.0984");
        c.require(near(s->bounds.at(1), 14.0, 1e-6), "bound[1] != 14");
        c.require(near(s->bounds.at(2), 12.6, 1e-6), "bound[2] != 12.6");
    }
    solver::Solution grid = solver::brute_force_oracle(g, 0.1);
    c.require(near(grid.objective, 216.0984, 8.124 * 0.1 * 2),
              "grid objective " + std::to_string(grid.objective) + " outside slack");
}

void run_tiny_unit_budget(Criterion& c) {
    pe::GroundInstance g = fixtures::tiny_ground(1.0);
    SolverConfig config;
    config.annualBound = 1.0;
    config.horizonYears = 1;

    solver::Solution search = solver::solve_breakpoints(g, config);
    c.require(search.objective <= 200.6628 + 1e-3,
              "search objective " + std::to_string(search.objective) + " > 200.6628 + 1e-3");
    solver::Solution grid = solver::brute_force_oracle(g, 0.001);
    c.require(near(search.objective, grid.objective, 0.02),
              "search vs grid: " + std::to_string(search.objective) + " vs " +
                  std::to_string(grid.objective));
}

// --- criterion 5: OPL export anchors ----------------------------------------
void run_opl_anchors(Criterion& c) {
    SolverConfig config;
    config.annualBound = 0.0;
    config.horizonYears = 2;
    DataStore store = fixtures::tiny_store();
    pe::GroundInstance g = pe::ground(fixtures::learn_instance(), store, config);
    pe::OplExport opl = pe::emit_opl(g);
    for (const char* anchor : {"minimize totalCharge;", "8.124 * payPeriodSupplyDemand[p]",
                               "pwlFunction kWfunction", "<= annualBound * 2"})
        c.require(opl.model.find(anchor) != std::string::npos,
                  std::string("missing anchor: ") + anchor);
}

// --- criterion 6: desk-scale synthetic pipeline -----------------------------
void run_desk_scale(Criterion& c) {
    fs::path root = fs::temp_directory_path() / "mtsa_acceptance_desk";
    fs::remove_all(root);
    cli::Workspace ws = cli::write_demo_workspace(root);

    DataStore store = cli::load_store(ws);
    c.require(store.calendar.size() == 26280,
              "calendar has " + std::to_string(store.calendar.size()) + " intervals");

    auto start = std::chrono::steady_clock::now();
    cli::RunReport report = cli::execute_script(ws, scripts::kPeakDemandLearnScript);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
    c.require(report.ok(), "script failed: " + (report.statements.empty()
                                                    ? std::string("no statements")
                                                    : report.statements.back().message));
    c.require(ms < 5000.0, "pipeline took " + std::to_string(ms) + " ms");
    if (!report.ok()) {
        fs::remove_all(root);
        return;
    }

    pe::GroundInstance g = cli::ground_event(ws, "LearnPeakDemandBoundParameter");
    c.require(g.futurePeriods.size() == 24,
              std::to_string(g.futurePeriods.size()) + " future periods, not 24");
    solver::Solution solution = solver::solve_zero_budget(g);
    c.require(solver::check_solution(g, solution, 1e-6).ok(),
              "solution check reported violations");

    // Independent recomputation of every learned bound from the raw data:
    // the larger of the current-month on-peak demand peak and 90% of the
    // summer on-peak peak across the preceding eleven periods.
    const TimeSeries& demand = store.series.at("ElectricPowerDemand");
    for (PeriodIndex p : g.futurePeriods) {
        double currentMax = 0.0;
        double precedingMax = 0.0;
        for (const auto& [t, row] : store.calendar.rows()) {
            bool weekday = row.weekDay >= 1 && row.weekDay <= 5;
            bool summer = row.month >= 6 && row.month <= 9;
            bool summerPeak = weekday && summer && row.hour >= 10 && row.hour <= 22;
            bool onPeak = weekday && (summerPeak || (!summer && row.hour >= 7 &&
                                                     row.hour <= 22));
            if (row.payPeriod == p && onPeak)
                currentMax = std::max(currentMax, demand.at(t));
            if (row.payPeriod >= p - 11 && row.payPeriod < p && summerPeak)
                precedingMax = std::max(precedingMax, demand.at(t));
        }
        double expected = std::max(currentMax, 0.9 * precedingMax);
        if (!near(solution.bounds.at(p), expected, 1e-9)) {
            c.require(false, "bound[" + std::to_string(p) + "] = " +
                                 std::to_string(solution.bounds.at(p)) + ", expected " +
                                 std::to_string(expected));
            break;
        }
    }
    fs::remove_all(root);
}

// --- criterion 7: randomized property suites --------------------------------
void run_property_suites(Criterion& c) {
    struct Named {
        const char* name;
        std::function<properties::SuiteResult()> run;
    };
    const Named suites[] = {
        {"homogeneity", [] { return properties::homogeneity_suite(200, 11); }},
        {"budget monotonicity", [] { return properties::budget_monotonicity_suite(200, 22); }},
        {"big-M agreement", [] { return properties::bigm_agreement_suite(200, 33); }},
        {"zero-budget vs grid", [] { return properties::zero_budget_oracle_suite(200, 44); }},
    };
    for (const auto& suite : suites) {
        properties::SuiteResult result = suite.run();
        c.require(result.cases >= 200,
                  std::string(suite.name) + " ran only " + std::to_string(result.cases));
        c.require(result.failures == 0,
                  std::string(suite.name) + ": " + result.note);
    }
}

// --- criterion 8: monitoring replay -----------------------------------------
void run_monitoring_replay(Criterion& c) {
    const std::string action =
        "The Electric Power Demand Greater Than The Peak Demand Bound. The Electric Load "
        "Shedding Is Recommended.";

    pe::Catalog catalog = fixtures::learn_catalog();
    for (const auto& stmt : sql::parse_script(scripts::kPeakDemandMonitorScript))
        catalog.add(stmt);

    CalendarTable month;
    for (TimeIndex t = 1; t <= 720; ++t)
        month.set(t, {1, 2012, 7, 1 + (t - 1) / 24, (t - 1) % 24, 2});
    DecisionParameterTable bounds("PeakDemandBound", ParamKeying::PerPeriod);
    bounds.set(1, 17211.0);
    monitor::MonitoringRule rule =
        monitor::compile_monitor("ELS_Monitoring_Recommendation", catalog, bounds, month);

    std::vector<monitor::StreamRecord> stream;
    for (TimeIndex t = 1; t <= 720; ++t) {
        double value = 16000.0 + (t % 120) * 10.0;
        if (t == 77 || t == 310 || t == 701) value = 17350.0 + t;  // three exceedances
        stream.push_back({t, value});
    }
    auto recs = monitor::replay(rule, stream);
    int fired = 0;
    for (const auto& rec : recs)
        if (rec.indicator == 1) {
            ++fired;
            c.require(rec.action.has_value() && *rec.action == action,
                      "fired record lacks the verbatim action text");
        }
    c.require(fired == 3, std::to_string(fired) + " records fired, expected 3");

    // Replaying the training demand of a zero-budget solve fires nothing.
    pe::GroundInstance g = fixtures::tiny_ground(0.0);
    solver::Solution solution = solver::solve_zero_budget(g);
    DecisionParameterTable learned("PeakDemandBound", ParamKeying::PerPeriod);
    for (const auto& [p, v] : solution.bounds) learned.set(p, v);
    monitor::MonitoringRule trained = monitor::compile_monitor(
        "ELS_Monitoring_Recommendation", catalog, learned, fixtures::tiny_calendar());
    TimeSeries demand = fixtures::tiny_demand();
    std::vector<monitor::StreamRecord> training;
    for (TimeIndex t = 1; t <= 4; ++t) training.push_back({t, demand.at(t)});
    for (const auto& rec : monitor::replay(trained, training))
        c.require(rec.indicator == 0, "training replay fired at t=" +
                                          std::to_string(rec.time));
}

}  // namespace

int main() {
    struct Entry {
        std::string label;
        std::function<void(Criterion&)> run;
        double limitMs;  // 0 = no wall-clock requirement
    };
    std::vector<Entry> criteria = {
        {"period-map fidelity", run_period_map, 1.0},
        {"dialect coverage and round-trip", run_dialect_coverage, 100.0},
        {"fixture zero-budget optimum", run_tiny_zero_budget, 1000.0},
        {"fixture unit-budget optimum vs reference grid", run_tiny_unit_budget, 10000.0},
        {"OPL export anchors", run_opl_anchors, 0.0},
        {"desk-scale synthetic pipeline", run_desk_scale, 0.0},  // timed internally
        {"randomized property suites", run_property_suites, 60000.0},
        {"monitoring replay", run_monitoring_replay, 0.0},
    };

    int failures = 0;
    int index = 0;
    for (auto& entry : criteria) {
        ++index;
        Criterion c;
        c.label = entry.label;
        auto start = std::chrono::steady_clock::now();
        try {
            entry.run(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        c.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
        if (entry.limitMs > 0 && c.millis >= entry.limitMs)
            c.require(false, "took " + std::to_string(c.millis) + " ms, limit " +
                                 std::to_string(entry.limitMs));
        std::printf("[%s] %d %s (%.1f ms)%s%s\n", c.pass ? "PASS" : "FAIL", index,
                    entry.label.c_str(), c.millis, c.pass ? "" : " — ",
                    c.pass ? "" : c.detail.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
