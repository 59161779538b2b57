#include "mtsa/pe/emit.hpp"

#include <cmath>
#include <sstream>

#include "mtsa/csv.hpp"

namespace mtsa::pe {

namespace {

using sql::CmpOp;

// OPL variable names: table names with the first letter lowered.
std::string opl_name(const std::string& tableName) {
    std::string out = tableName;
    if (!out.empty())
        out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
    return out;
}

std::string_view opl_op(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "==";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "==";
}

struct OplNames {
    std::string demand;
    std::string bound;
    std::string supply;
    std::string meter;
};

std::string render_term(const Term& term, const OplNames& names) {
    std::string base;
    switch (term.kind) {
        case Term::Kind::Constant:
            return format_number(term.offset);
        case Term::Kind::TimeVar:
            base = "i.pInterval";
            break;
        case Term::Kind::PeriodVar:
            base = "p";
            break;
        case Term::Kind::Series:
            if (calendar_attribute(term.name))
                base = "i." + *calendar_attribute(term.name);
            else
                base = names.demand + "[i]";
            break;
        case Term::Kind::Param:
            if (term.paramKey == ParamKeying::PerInterval)
                base = names.meter + "[i]";
            else if (ci_equal(term.name, names.bound))
                base = names.bound + "[p]";
            else
                base = names.supply + "[p]";
            break;
    }
    std::string out;
    if (term.scale != 1.0) out += format_number(term.scale) + " * ";
    out += base;
    if (term.offset != 0.0)
        out += (term.offset < 0 ? " - " : " + ") + format_number(std::fabs(term.offset));
    return out;
}

std::string render_formula(const Formula& f, const OplNames& names) {
    if (f.kind == Formula::Kind::Atom) {
        const Atom& a = *f.atom;
        return render_term(a.lhs, names) + " " + std::string(opl_op(a.op)) + " " +
               render_term(a.rhs, names);
    }
    const char* sep = f.kind == Formula::Kind::And ? " && " : " || ";
    std::string out;
    for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += sep;
        const Formula& child = f.children[i];
        if (child.kind == Formula::Kind::Atom)
            out += render_formula(child, names);
        else
            out += "(" + render_formula(child, names) + ")";
    }
    return out;
}

std::string var_time_suffix(TimeIndex t) {
    return t < 0 ? "m" + std::to_string(-t) : std::to_string(t);
}

std::string lp_coef(double coef, const std::string& var, bool leading) {
    std::string out;
    if (coef < 0)
        out += leading ? "-" : "- ";
    else if (!leading)
        out += "+ ";
    double mag = std::fabs(coef);
    if (mag != 1.0) out += format_number(mag) + " ";
    out += var;
    return out;
}

}  // namespace

double default_big_m(const GroundInstance& g) { return g.max_demand(); }

OplExport emit_opl(const GroundInstance& g) {
    OplNames names;
    names.demand = g.demandSeries.empty() ? "inputSeries" : opl_name(g.demandSeries);
    names.bound = g.boundParam.empty() ? "bound" : opl_name(g.boundParam);
    names.supply = opl_name(g.supplyParam);
    names.meter = g.meterParam.empty() ? "meter" : opl_name(g.meterParam);

    std::ostringstream mod;
    mod << "/*****\n"
        << " * Peak demand charge model\n"
        << " * generated from a learning event over " << g.demandSeries << "\n"
        << " *****/\n"
        << "float timeIntervalSize = ...;\n"
        << "int nbPayPeriods = ...;\n"
        << "float annualBound = ...;\n"
        << "range PayPeriods = 1..nbPayPeriods;\n"
        << "\n"
        << "tuple powerInterval{\n"
        << "  int pInterval;\n"
        << "  int payPeriod;\n"
        << "  int year;\n"
        << "  int month;\n"
        << "  int day;\n"
        << "  int hour;\n"
        << "  int weekDay;\n"
        << "}\n"
        << "\n"
        << "{powerInterval} PowerIntervals = ...;\n"
        << "float " << names.demand << "[PowerIntervals] = ...;\n"
        << "\n"
        << "dvar float+ " << names.bound << "[PayPeriods];\n"
        << "dvar float+ " << names.meter << "[PowerIntervals];\n"
        << "dvar float+ " << names.supply << "[PayPeriods];\n"
        << "\n"
        << "pwlFunction kWfunction[i in PowerIntervals] = piecewise(1 -> " << names.demand
        << "[i]; 0);\n"
        << "dexpr float generationDemandCharge[p in PayPeriods] = " << format_number(g.rate)
        << " * " << names.supply << "[p];\n"
        << "dexpr float totalCharge = sum(p in PayPeriods) (generationDemandCharge[p]);\n"
        << "\n"
        << "minimize totalCharge;\n"
        << "\n"
        << "subject to {\n"
        << "  forall(i in PowerIntervals : i.pInterval <= 0) " << names.meter << "[i] == "
        << names.demand << "[i];\n"
        << "\n"
        << "  forall(i in PowerIntervals : i.pInterval >= 1) " << names.meter
        << "[i] == kWfunction[i](" << names.bound << "[i.payPeriod]);\n"
        << "\n";
    if (g.boundLeSupply)
        mod << "  forall (p in PayPeriods) " << names.bound << "[p] <= " << names.supply
            << "[p];\n\n";

    for (const auto& constraint : g.source.globals) {
        if (!std::holds_alternative<ImplicationConstraint>(constraint)) continue;
        const auto& impl = std::get<ImplicationConstraint>(constraint);
        std::string filter = render_formula(impl.guard, names);
        if (filter.find("||") != std::string::npos)
            mod << "  // month-window filter emitted as a disjunction\n";
        Atom c = impl.consequent;
        if (c.op == CmpOp::Le || c.op == CmpOp::Lt) {
            std::swap(c.lhs, c.rhs);
            c.op = c.op == CmpOp::Le ? CmpOp::Ge : CmpOp::Gt;
        }
        mod << "  forall(p in PayPeriods)\n"
            << "    forall(i in PowerIntervals : " << filter << ")\n"
            << "      " << render_term(c.lhs, names) << " " << opl_op(c.op) << " "
            << render_term(c.rhs, names) << ";\n\n";
    }

    mod << "  sum(i in PowerIntervals : i.pInterval >= 1) (" << names.demand << "[i] - "
        << names.meter << "[i]) <= annualBound * " << g.horizonYears << ";\n"
        << "}\n";

    std::ostringstream dat;
    double annualBoundScaled =
        g.horizonYears > 0 ? g.budget / g.horizonYears / g.timeIntervalSize : 0.0;
    dat << "timeIntervalSize = " << format_number(g.timeIntervalSize) << ";\n"
        << "nbPayPeriods = " << (g.futurePeriods.empty() ? 0 : g.futurePeriods.back())
        << ";\n"
        << "annualBound = " << format_number(annualBoundScaled) << ";\n"
        << "PowerIntervals = {\n";
    for (const auto& [t, row] : g.calendar.rows())
        dat << "<" << t << ", " << row.payPeriod << ", " << row.year << ", " << row.month
            << ", " << row.day << ", " << row.hour << ", " << row.weekDay << ">,\n";
    dat << "};\n" << names.demand << " = [";
    bool first = true;
    for (const auto& [t, row] : g.calendar.rows()) {
        (void)row;
        if (!first) dat << ", ";
        dat << format_number(g.demand_at(t));
        first = false;
    }
    dat << "];\n";

    return {mod.str(), dat.str()};
}

std::string emit_milp(const GroundInstance& g, double bigM) {
    double maxDemand = g.max_demand();
    if (bigM < maxDemand)
        throw EmitError(EmitError::Kind::BadBigM,
                        "big-M " + format_number(bigM) + " is below the maximum demand " +
                            format_number(maxDemand));

    auto boundVar = [&](int periodIdx) {
        return "bound_p" + std::to_string(g.futurePeriods[periodIdx]);
    };
    auto supplyVar = [&](int periodIdx) {
        return "supply_p" + std::to_string(g.futurePeriods[periodIdx]);
    };
    auto meterVar = [&](TimeIndex t) { return "kw_t" + var_time_suffix(t); };
    auto binVar = [&](TimeIndex t) { return "z_t" + var_time_suffix(t); };

    std::ostringstream lp;
    lp << "\\ peak demand charge model, big-M linearized meter\n";
    lp << "Minimize\n obj:";
    for (std::size_t i = 0; i < g.futurePeriods.size(); ++i)
        lp << " " << lp_coef(g.rate, supplyVar(static_cast<int>(i)), i == 0);
    lp << "\nSubject To\n";

    int rowId = 0;
    for (const auto& row : g.supplyRows) {
        lp << " sup" << rowId++ << ": " << supplyVar(row.periodIdx);
        if (row.onMeter)
            lp << " - " << lp_coef(row.coef, meterVar(row.time), true) << " >= 0\n";
        else
            lp << " >= " << format_number(row.coef * g.demand_at(row.time)) << "\n";
    }
    if (g.boundLeSupply)
        for (std::size_t i = 0; i < g.futurePeriods.size(); ++i)
            lp << " link_p" << g.futurePeriods[i] << ": " << boundVar(static_cast<int>(i))
               << " - " << supplyVar(static_cast<int>(i)) << " <= 0\n";

    std::string m = format_number(bigM);
    for (const auto& rec : g.minRecords) {
        std::string kw = meterVar(rec.time);
        std::string z = binVar(rec.time);
        std::string bound = boundVar(rec.periodIdx);
        std::string d = format_number(rec.demand);
        lp << " cap_d_t" << var_time_suffix(rec.time) << ": " << kw << " <= " << d << "\n";
        lp << " cap_b_t" << var_time_suffix(rec.time) << ": " << kw << " - " << bound
           << " <= 0\n";
        lp << " flo_d_t" << var_time_suffix(rec.time) << ": " << kw << " + " << m << " " << z
           << " >= " << d << "\n";
        lp << " flo_b_t" << var_time_suffix(rec.time) << ": " << kw << " - " << bound
           << " - " << m << " " << z << " >= -" << m << "\n";
    }

    if (g.hasMeter) {
        // sum(d - kw) * tis <= budget  ->  sum kw >= sum d - budget / tis
        double rhs = 0.0;
        for (TimeIndex t : g.futureTimes) rhs += g.demand_at(t);
        rhs -= g.budget / g.timeIntervalSize;
        lp << " shed_budget:";
        for (std::size_t i = 0; i < g.futureTimes.size(); ++i)
            lp << " " << lp_coef(1.0, meterVar(g.futureTimes[i]), i == 0);
        lp << " >= " << format_number(rhs) << "\n";
    }

    lp << "Bounds\n";
    if (g.hasMeter)
        for (TimeIndex t : g.pastTimes)
            lp << " " << meterVar(t) << " = " << format_number(g.demand_at(t)) << "\n";

    if (!g.minRecords.empty()) {
        lp << "Binaries\n";
        for (const auto& rec : g.minRecords) lp << " " << binVar(rec.time) << "\n";
    }
    lp << "End\n";
    return lp.str();
}

}  // namespace mtsa::pe
