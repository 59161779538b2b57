#pragma once

#include <string_view>

namespace mtsa::scripts {

// Peak demand charge learning for a campus microgrid: input tables, the
// contract-term and event-occurrence views, and the learning event.
inline constexpr std::string_view kPeakDemandLearnScript = R"SQL(
-- Input series and calendar attribute tables.
CREATE TABLE ElectricPowerDemand (
    time HOURLY_INTERVAL,
    value REAL);

CREATE TABLE PayPeriod (
    time HOURLY_INTERVAL,
    period MONTHLY_INTERVAL,
    UNIQUE MAP(time, period));

CREATE TABLE Year (time HOURLY_INTERVAL, y INTEGER);
CREATE TABLE Month (time HOURLY_INTERVAL, m INTEGER);
CREATE TABLE Day (time HOURLY_INTERVAL, d INTEGER);
CREATE TABLE WeekDay (time HOURLY_INTERVAL, d INTEGER);
CREATE TABLE Hour (time HOURLY_INTERVAL, h INTEGER);

-- Decision parameter tables.
CREATE TABLE PeakDemandBound (
    time HOURLY_INTERVAL,
    period MONTHLY_INTERVAL,
    value REAL,
    UNIQUE MAP(time, period));

CREATE TABLE PayPeriodSupplyDemand (
    time HOURLY_INTERVAL,
    period MONTHLY_INTERVAL,
    value REAL,
    UNIQUE MAP(time, period));

CREATE TABLE KW (
    time HOURLY_INTERVAL,
    value REAL);

-- Monthly supply charge at the contract generation rate.
CREATE VIEW MonthlyEServiceCharge AS (
    SELECT PPSD.time, PPSD.period, 8.124 * PPSD.value AS Charge
    FROM PayPeriodSupplyDemand PPSD);

-- Contract term: billed demand covers the current month's on-peak metered load.
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

-- Contract term: billed demand also covers 90% of the summer on-peak metered
-- load across the preceding eleven pay periods.
CREATE VIEW PrecedingBillingMonth AS (
  SELECT PayPeriod.time, PayPeriodSupplyDemand.period,
    PayPeriodSupplyDemand.value AS payPeriodSupplyDemand,
    KW.value AS kw,
    (CASE WHEN (PayPeriod.period >= PayPeriodSupplyDemand.period - 11
      AND PayPeriod.period < PayPeriodSupplyDemand.period)
      AND (WeekDay.d >= 1 AND WeekDay.d <= 5)
      AND (Month.m >= 6 AND Month.m <= 9)
      AND (Hour.h >= 10 AND Hour.h <= 22)
      AND PayPeriod.time = WeekDay.time
      AND WeekDay.time = Hour.time
      AND Hour.time = Month.time
      AND Month.time = KW.time
    THEN '1' ELSE '0' END) AS Indicator
  FROM PayPeriod, WeekDay, Hour, Month, PayPeriodSupplyDemand, KW);

-- Event occurrence: when demand exceeds the bound the meter records the bound.
CREATE VIEW ElectricPowerGreaterPeakDemandBound AS (
  SELECT PayPeriod.time, PayPeriod.period,
    PeakDemandBound.value AS peakDemandBound, KW.value AS kw,
    (CASE WHEN ElectricPowerDemand.value > PeakDemandBound.value
      AND PayPeriod.time >= 1
      AND PayPeriod.time = ElectricPowerDemand.time
      AND ElectricPowerDemand.time = PeakDemandBound.time
      AND PeakDemandBound.time = KW.time
    THEN '1' ELSE '0' END) AS Indicator
  FROM PayPeriod, ElectricPowerDemand, PeakDemandBound, KW);

-- Otherwise the meter records the demand itself; history is always metered.
CREATE VIEW ElectricPowerLessEqualPeakDemandBound AS (
  SELECT PayPeriod.time, PayPeriod.period,
    ElectricPowerDemand.value AS electricPowerDemand, KW.value AS kw,
    (CASE WHEN (ElectricPowerDemand.value <= PeakDemandBound.value
      OR PayPeriod.time <= 0)
      AND PayPeriod.time = ElectricPowerDemand.time
      AND ElectricPowerDemand.time = PeakDemandBound.time
      AND PeakDemandBound.time = KW.time
    THEN '1' ELSE '0' END) AS Indicator
  FROM PayPeriod, ElectricPowerDemand, PeakDemandBound, KW);

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

// Threshold monitoring over the learned bound, with the recommendation view.
inline constexpr std::string_view kPeakDemandMonitorScript = R"SQL(
CREATE VIEW ElectricLoadShedding AS (
    SELECT EPD.time, (CASE WHEN EPD.value > PDB.value
        THEN '1' ELSE '0' END) AS Indicator
    FROM ElectricPowerDemand EPD, PeakDemandBound PDB
    WHERE EPD.time = PDB.time);

CREATE VIEW ELS_Monitoring_Recommendation AS (
    SELECT ELS.time, (CASE WHEN ELS.Indicator = '1'
        THEN 'The Electric Power Demand Greater Than The Peak Demand Bound. The Electric Load Shedding Is Recommended.' END) AS Action
    FROM ElectricLoadShedding ELS);

MONITOR ELS_Monitoring_Recommendation;
)SQL";

}  // namespace mtsa::scripts
