#pragma once

#include <array>
#include <string_view>

// Dialect coverage corpus: the eight statement shapes the language is
// defined by (input table, uniquely mapped parameter table, indicator and
// recommendation views, arithmetic projection, both contract-term views,
// and the learning event).
namespace samples {

inline constexpr std::string_view kCreateDemandTable = R"SQL(
CREATE TABLE ElectricPowerDemand (
    time HOURLY_INTERVAL,
    value REAL);
)SQL";

inline constexpr std::string_view kCreateBoundTable = R"SQL(
CREATE TABLE PeakDemandBound (
    time HOURLY_INTERVAL,
    period MONTHLY_INTERVAL,
    value REAL,
    UNIQUE MAP(time, period));
)SQL";

inline constexpr std::string_view kSheddingView = R"SQL(
CREATE VIEW ElectricLoadShedding AS (
    SELECT EPD.time, (CASE WHEN EPD.value > PDB.value
        THEN '1' ELSE '0' END) AS Indicator
    FROM ElectricPowerDemand EPD, PeakDemandBound PDB
    WHERE EPD.time = PDB.time);
)SQL";

inline constexpr std::string_view kRecommendationView = R"SQL(
CREATE VIEW ELS_Monitoring_Recommendation AS (
    SELECT ELS.time, (CASE WHEN ELS.Indicator = '1'
        THEN 'The Electric Power Demand Greater Than The Peak Demand Bound. The Electric Load Shedding Is Recommended.' END) AS Action
    FROM ElectricLoadShedding ELS);

MONITOR ELS_Monitoring_Recommendation;
)SQL";

inline constexpr std::string_view kChargeView = R"SQL(
CREATE VIEW MonthlyEServiceCharge AS (
    SELECT PPSD.time, PPSD.period, 8.124 * PPSD.value AS Charge
    FROM PayPeriodSupplyDemand PPSD);
)SQL";

inline constexpr std::string_view kCurrentMonthView = R"SQL(
CREATE VIEW CurrentBillingMonth AS (
  SELECT PayPeriod.time, PayPeriod.period,
    PayPeriodSupplyDemand.value AS payPeriodSupplyDemand,
    KW.value AS kw,
    (CASE WHEN (WeekDay.d >= 1 AND WeekDay.d <= 5)
      AND ((Hour.h >= 10 AND Hour.h <= 22
        AND Month.m >= 6 AND Month.m <= 9)
      OR ((Hour.h >= 7 AND Hour.h <= 22)
        AND (Month.m <= 5 OR Month.m >= 10)))
      AND PayPeriod.time = WeekDay.time
      AND WeekDay.time = Hour.time
      AND Hour.time = Month.time
      AND Month.time = PayPeriodSupplyDemand.time
      AND PayPeriodSupplyDemand.time = KW.time
    THEN '1' ELSE '0' END) AS Indicator
  FROM PayPeriod, WeekDay, Hour, Month, PayPeriodSupplyDemand, KW);
)SQL";

inline constexpr std::string_view kPeakBoundView = R"SQL(
CREATE VIEW ElectricPowerPeakDemandBound AS (
  SELECT PayPeriod.time, PayPeriod.period,
    PeakDemandBound.value AS peakDemandBound, KW.value AS kw,
    (CASE WHEN ElectricPowerDemand.value > PeakDemandBound.value
      AND PayPeriod.time >= 1
      AND PayPeriod.time = ElectricPowerDemand.time
      AND ElectricPowerDemand.time = PeakDemandBound.time
      AND PeakDemandBound.time = KW.time
    THEN '1' ELSE '0' END) AS Indicator
  FROM PayPeriod, ElectricPowerDemand, PeakDemandBound, KW);
)SQL";

inline constexpr std::string_view kLearnEvent = R"SQL(
CREATE EVENT LearnPeakDemandBoundParameter (
  GC_LEARN PeakDemandBound, PayPeriodSupplyDemand, KW
  FOR MINIMIZE SUM(MESC.Charge) AS TotalCharge
  WITH CBM.Indicator = '1' THEN
    CBM.payPeriodSupplyDemand >= CBM.kw
  AND PBM.Indicator = '1' THEN
    PBM.payPeriodSupplyDemand >= 0.9 * PBM.kw
  AND PDB.value <= PPSD.value
  AND PDB.value >= 0
  AND EPGPDB.Indicator = '1' THEN
    EPGPDB.kw = EPGPDB.peakDemandBound
  AND EPLEPDB.Indicator = '1' THEN
    EPLEPDB.kw = EPLEPDB.electricPowerDemand
  FROM CurrentBillingMonth CBM, PrecedingBillingMonth PBM,
    PeakDemandBound PDB, PayPeriodSupplyDemand PPSD, KW,
    ElectricPowerGreaterPeakDemandBound EPGPDB,
    ElectricPowerLessEqualPeakDemandBound EPLEPDB,
    MonthlyEServiceCharge MESC
  WHERE CBM.time = PBM.time
  AND PBM.time = PDB.time
  AND PDB.time = PPSD.time
  AND PPSD.time = KW.time
  AND KW.time = EPGPDB.time
  AND EPGPDB.time = EPLEPDB.time
  AND EPLEPDB.time = MESC.time);

EXECUTE LearnPeakDemandBoundParameter;
)SQL";

inline constexpr std::array<std::string_view, 8> kAll = {
    kCreateDemandTable, kCreateBoundTable, kSheddingView, kRecommendationView,
    kChargeView,        kCurrentMonthView, kPeakBoundView, kLearnEvent,
};

}  // namespace samples
