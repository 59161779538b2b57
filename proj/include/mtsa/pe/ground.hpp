#pragma once

#include <string>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/pe/instance.hpp"

namespace mtsa::pe {

class GroundError : public Error {
public:
    enum class Kind { MissingSeries, CalendarGap, UnsupportedShape, BadConfig };

    GroundError(Kind kind, const std::string& message)
        : Error("ground error: " + message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// One expanded supply constraint: supply[p] >= coef * kW[time] when onMeter,
// else supply[p] >= coef * demand(time).
struct SupplyRow {
    int periodIdx = 0;
    TimeIndex time = 0;
    double coef = 1.0;
    bool onMeter = true;
    int constraintIdx = 0;  // into source.globals
};

// Min-structure record for one future interval: kW = min(demand, bound[p]).
struct MinRecord {
    TimeIndex time = 0;
    int periodIdx = 0;
    double demand = 0.0;
};

struct GroundInstance {
    CalendarTable calendar;
    std::string demandSeries;

    TimeIndex tMin = 0;
    TimeIndex tMax = -1;
    std::vector<double> demand;  // dense, indexed by t - tMin
    std::vector<TimeIndex> pastTimes;
    std::vector<TimeIndex> futureTimes;
    std::vector<PeriodIndex> futurePeriods;  // sorted ascending

    bool hasMeter = false;
    std::vector<MinRecord> minRecords;  // one per future time
    std::vector<SupplyRow> supplyRows;
    bool boundLeSupply = false;
    bool boundNonnegative = false;

    double budget = 0.0;  // total interruption energy allowed over the horizon
    double rate = 1.0;
    double timeIntervalSize = 1.0;
    int horizonYears = 2;

    std::string boundParam;
    std::string supplyParam;
    std::string meterParam;

    PEInstance source;  // symbolic form retained for model export

    double demand_at(TimeIndex t) const {
        return demand[static_cast<std::size_t>(t - tMin)];
    }
    int period_index(PeriodIndex p) const;        // -1 when p is not a future period
    int period_index_of_time(TimeIndex t) const;  // -1 for past intervals
    double max_demand() const;
    std::size_t meterVarCount() const { return demand.size(); }
};

GroundInstance ground(const PEInstance& instance, const DataStore& store,
                      const SolverConfig& config);

}  // namespace mtsa::pe
