#include "mtsa/cli/demo.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "mtsa/csv.hpp"

namespace mtsa::cli {

namespace {

constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
constexpr int kHoursPerYear = 8760;  // three 365-day years keep periods aligned
constexpr int kFirstWeekDay = 6;     // the horizon starts on a Saturday

struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed * 2862933555777941757ULL + 3037000493ULL) {}
    double next() {  // uniform in [-1, 1)
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) / 4503599627370496.0 - 1.0;
    }
};

}  // namespace

CalendarTable build_demo_calendar() {
    CalendarTable cal;
    TimeIndex t = -(kHoursPerYear - 1);  // one past year ending at t = 0
    for (int yearIdx = 0; yearIdx < 3; ++yearIdx) {
        int year = 2011 + yearIdx;
        for (int month = 1; month <= 12; ++month) {
            PeriodIndex period = static_cast<PeriodIndex>((yearIdx - 1) * 12 + month);
            for (int day = 1; day <= kMonthDays[month - 1]; ++day) {
                for (int hour = 0; hour < 24; ++hour, ++t) {
                    long hoursFromStart = static_cast<long>(t) + (kHoursPerYear - 1);
                    int weekDay =
                        static_cast<int>((hoursFromStart / 24 + kFirstWeekDay) % 7);
                    cal.set(t, {period, year, month, day, hour, weekDay});
                }
            }
        }
    }
    return cal;
}

TimeSeries build_demo_demand(const CalendarTable& cal, std::uint64_t seed) {
    // Seasonal, daily, and weekday shape around a campus base load, scaled
    // so summer weekday afternoons peak in the high-teens of megawatts.
    constexpr std::array<double, 12> monthFactor = {0.86, 0.84, 0.85, 0.90, 0.96, 1.07,
                                                    1.18, 1.12, 1.03, 0.93, 0.88, 0.87};
    constexpr std::array<double, 24> hourFactor = {
        0.58, 0.55, 0.53, 0.52, 0.53, 0.57, 0.66, 0.76, 0.85, 0.92, 0.96, 0.98,
        0.99, 0.995, 1.0, 0.995, 0.97, 0.93, 0.88, 0.82, 0.76, 0.70, 0.65, 0.61};

    Lcg rng(seed);
    TimeSeries demand("ElectricPowerDemand");
    for (const auto& [t, row] : cal.rows()) {
        double base = 14600.0;
        double yearGrowth = row.year == 2011 ? 0.94 : row.year == 2012 ? 1.0 : 1.063;
        double weekday = (row.weekDay >= 1 && row.weekDay <= 5) ? 1.0 : 0.78;
        double value = base * monthFactor[row.month - 1] * hourFactor[row.hour] * weekday *
                       yearGrowth;
        value *= 1.0 + 0.008 * rng.next();
        demand.set(t, std::round(value * 10.0) / 10.0);
    }
    return demand;
}

Workspace write_demo_workspace(const std::filesystem::path& root, std::uint64_t seed) {
    Workspace ws = init_workspace(root);
    ws.solver = SolverChoice::ZeroBudget;
    ws.config.annualBound = 0.0;
    {
        std::ofstream config(root / "mtsa.toml", std::ios::trunc);
        config << "# demo workspace: zero interruption budget\n"
               << "annualBound = 0\n"
               << "timeIntervalSize = 1\n"
               << "horizonYears = 2\n"
               << "tolerance = 1e-06\n"
               << "gridStep = 0.1\n"
               << "maxExhaustiveCombos = 2000000\n"
               << "refinementIters = 3\n"
               << "solver = zero_budget\n";
    }
    CalendarTable cal = build_demo_calendar();
    TimeSeries demand = build_demo_demand(cal, seed);
    std::ofstream(ws.data_dir() / "calendar.csv") << serialize_calendar(cal);
    std::ofstream(ws.data_dir() / "ElectricPowerDemand.csv") << serialize_series(demand);
    return ws;
}

}  // namespace mtsa::cli
