#include "mtsa/pe/compiler.hpp"

#include <algorithm>
#include <set>

#include "mtsa/dialect/printer.hpp"

namespace mtsa::pe {

namespace {

using sql::CmpOp;

[[noreturn]] void unresolved(const std::string& message) {
    throw CompileError(CompileError::Kind::UnresolvedReference, message);
}

[[noreturn]] void unsupported(const std::string& message) {
    throw CompileError(CompileError::Kind::UnsupportedGuardShape, message);
}

// Role of one FROM binding inside a view or event.
struct BoundTable {
    std::string bindingName;  // alias, or table name when unaliased
    std::string tableName;
    std::optional<std::string> calendarAttr;  // payPeriod/year/month/...
    bool isLearnParam = false;
    ParamKeying keying = ParamKeying::PerInterval;
    std::string timeCol;
    std::string periodCol;  // empty for per-interval tables
    std::string valueCol;
    bool isView = false;
    bool timeJoined = false;
};

struct Env {
    std::map<std::string, BoundTable, CiLess> tables;
    const Catalog* catalog = nullptr;
    const std::vector<std::string>* learnParams = nullptr;

    const BoundTable* find(std::string_view binding) const {
        auto it = tables.find(binding);
        return it == tables.end() ? nullptr : &it->second;
    }
};

bool is_learn_param(const std::vector<std::string>* params, std::string_view table) {
    if (!params) return false;
    return std::any_of(params->begin(), params->end(),
                       [&](const std::string& p) { return ci_equal(p, table); });
}

// Column roles from a table schema: the first interval-typed column keys
// time, the second keys the period; UNIQUE MAP names them explicitly.
void assign_columns(BoundTable& bound, const sql::CreateTable& schema) {
    if (schema.uniqueMap) {
        bound.timeCol = schema.uniqueMap->timeColumn;
        bound.periodCol = schema.uniqueMap->periodColumn;
    } else {
        for (const auto& col : schema.columns) {
            if (!sql::is_interval_type(col.type)) continue;
            if (bound.timeCol.empty())
                bound.timeCol = col.name;
            else if (bound.periodCol.empty())
                bound.periodCol = col.name;
        }
    }
    for (const auto& col : schema.columns) {
        if (sql::is_interval_type(col.type)) continue;
        if (ci_equal(col.name, bound.timeCol) || ci_equal(col.name, bound.periodCol)) continue;
        bound.valueCol = col.name;
        break;
    }
}

Env build_env(const std::vector<sql::TableRef>& from, const Catalog& catalog,
              const std::vector<std::string>* learnParams) {
    Env env;
    env.catalog = &catalog;
    env.learnParams = learnParams;
    for (const auto& ref : from) {
        BoundTable bound;
        bound.bindingName = ref.binding();
        bound.tableName = ref.table;
        if (const sql::CreateView* view = catalog.find_view(ref.table)) {
            (void)view;
            bound.isView = true;
        } else if (const sql::CreateTable* table = catalog.find_table(ref.table)) {
            bound.calendarAttr = calendar_attribute(ref.table);
            assign_columns(bound, *table);
            bound.keying =
                bound.periodCol.empty() ? ParamKeying::PerInterval : ParamKeying::PerPeriod;
            // A table with a uniquely mapped period key has the
            // decision-parameter schema; GC_LEARN covers per-interval
            // parameter tables such as the meter.
            bound.isLearnParam = is_learn_param(learnParams, ref.table) ||
                                 (!bound.calendarAttr && !bound.periodCol.empty());
        } else {
            unresolved("unknown table or view '" + ref.table + "'");
        }
        env.tables[bound.bindingName] = bound;
    }
    return env;
}

bool is_plain_column(const sql::Operand& op, sql::ColumnRef& out) {
    if (!std::holds_alternative<sql::LinExpr>(op)) return false;
    const auto& lin = std::get<sql::LinExpr>(op);
    if (!lin.column || lin.scale != 1.0 || lin.offset != 0.0) return false;
    out = *lin.column;
    return true;
}

bool is_time_column(const Env& env, const sql::ColumnRef& ref) {
    const BoundTable* bound = env.find(ref.qualifier);
    if (!bound) return false;
    if (bound->isView) return ci_equal(ref.column, "time");
    return !bound->timeCol.empty() && ci_equal(ref.column, bound->timeCol);
}

bool is_time_join(const Env& env, const sql::Comparison& cmp) {
    if (cmp.op != CmpOp::Eq) return false;
    sql::ColumnRef lhs, rhs;
    if (!is_plain_column(cmp.lhs, lhs) || !is_plain_column(cmp.rhs, rhs)) return false;
    return is_time_column(env, lhs) && is_time_column(env, rhs);
}

void collect_joins(Env& env, const sql::BoolExpr& cond) {
    if (cond.kind == sql::BoolExpr::Kind::Cmp) {
        if (is_time_join(env, *cond.cmp)) {
            for (const auto& operand : {cond.cmp->lhs, cond.cmp->rhs}) {
                sql::ColumnRef ref;
                is_plain_column(operand, ref);
                env.tables.find(ref.qualifier)->second.timeJoined = true;
            }
        }
        return;
    }
    if (cond.kind == sql::BoolExpr::Kind::And)
        for (const auto& child : cond.children) collect_joins(env, child);
}

void collect_joins(Env& env, const std::vector<sql::Comparison>& where) {
    for (const auto& cmp : where) {
        sql::BoolExpr leaf;
        leaf.kind = sql::BoolExpr::Kind::Cmp;
        leaf.cmp = cmp;
        collect_joins(env, leaf);
    }
}

// Forward declaration: views resolve recursively through their select lists.
Term resolve_column(const Env& env, const sql::ColumnRef& ref, int depth);

Term resolve_lin_expr(const Env& env, const sql::LinExpr& lin, int depth) {
    if (!lin.column) {
        Term t;
        t.kind = Term::Kind::Constant;
        t.offset = lin.offset;
        return t;
    }
    Term inner = resolve_column(env, *lin.column, depth);
    inner.offset = lin.scale * inner.offset + lin.offset;
    inner.scale = lin.scale * inner.scale;
    if (inner.kind == Term::Kind::Constant) inner.scale = 1.0;
    return inner;
}

const sql::SelectItem* find_select_item(const sql::Select& select, std::string_view name) {
    for (const auto& item : select.items) {
        if (!item.alias.empty()) {
            if (ci_equal(item.alias, name)) return &item;
            continue;
        }
        if (std::holds_alternative<sql::LinExpr>(item.value)) {
            const auto& lin = std::get<sql::LinExpr>(item.value);
            if (lin.column && ci_equal(lin.column->column, name)) return &item;
        }
    }
    return nullptr;
}

Term resolve_column(const Env& env, const sql::ColumnRef& ref, int depth) {
    if (depth > 8) unresolved("view reference chain too deep at '" + ref.column + "'");
    if (ref.qualifier.empty()) unresolved("unqualified column '" + ref.column + "'");
    const BoundTable* bound = env.find(ref.qualifier);
    if (!bound) unresolved("unknown alias '" + ref.qualifier + "'");

    if (bound->isView) {
        const sql::CreateView* view = env.catalog->find_view(bound->tableName);
        const sql::SelectItem* item = find_select_item(view->select, ref.column);
        if (!item)
            unresolved("view " + view->name + " has no column '" + ref.column + "'");
        if (!std::holds_alternative<sql::LinExpr>(item->value))
            unsupported("indicator column '" + ref.column + "' used as a value");
        Env inner = build_env(view->select.from, *env.catalog, env.learnParams);
        collect_joins(inner, view->select.where);
        for (const auto& it : view->select.items)
            if (std::holds_alternative<sql::CaseWhen>(it.value))
                collect_joins(inner, std::get<sql::CaseWhen>(it.value).condition);
        return resolve_lin_expr(inner, std::get<sql::LinExpr>(item->value), depth + 1);
    }

    Term t;
    if (!bound->timeCol.empty() && ci_equal(ref.column, bound->timeCol)) {
        t.kind = Term::Kind::TimeVar;
        return t;
    }
    if (bound->calendarAttr) {
        t.kind = Term::Kind::Series;
        t.name = *bound->calendarAttr;
        return t;
    }
    if (!bound->periodCol.empty() && ci_equal(ref.column, bound->periodCol)) {
        if (bound->isLearnParam && !bound->timeJoined) {
            t.kind = Term::Kind::PeriodVar;
            return t;
        }
        // A time-equijoined, uniquely mapped table's period key is the
        // period of the joined time interval.
        t.kind = Term::Kind::Series;
        t.name = "payPeriod";
        return t;
    }
    if (!bound->valueCol.empty() && ci_equal(ref.column, bound->valueCol)) {
        if (bound->isLearnParam) {
            t.kind = Term::Kind::Param;
            t.name = bound->tableName;
            t.paramKey = bound->keying;
            return t;
        }
        t.kind = Term::Kind::Series;
        t.name = bound->tableName;
        return t;
    }
    unresolved("table " + bound->tableName + " has no column '" + ref.column + "'");
}

Term resolve_operand(const Env& env, const sql::Operand& op, int depth = 0) {
    if (std::holds_alternative<std::string>(op))
        unsupported("string literal used in a numeric comparison");
    return resolve_lin_expr(env, std::get<sql::LinExpr>(op), depth);
}

Atom resolve_comparison(const Env& env, const sql::Comparison& cmp) {
    Atom atom;
    atom.lhs = resolve_operand(env, cmp.lhs);
    atom.op = cmp.op;
    atom.rhs = resolve_operand(env, cmp.rhs);
    return atom;
}

bool is_tautological_join(const Atom& atom) {
    return atom.op == CmpOp::Eq && atom.lhs.kind == Term::Kind::TimeVar &&
           atom.rhs.kind == Term::Kind::TimeVar && atom.lhs.scale == atom.rhs.scale &&
           atom.lhs.offset == atom.rhs.offset;
}

Formula translate(const Env& env, const sql::BoolExpr& cond) {
    if (cond.kind == sql::BoolExpr::Kind::Cmp)
        return Formula::make(resolve_comparison(env, *cond.cmp));
    Formula node;
    node.kind = cond.kind == sql::BoolExpr::Kind::And ? Formula::Kind::And : Formula::Kind::Or;
    for (const auto& child : cond.children) node.children.push_back(translate(env, child));
    return node;
}

Atom period_binding_atom() {
    Atom atom;
    atom.lhs.kind = Term::Kind::Series;
    atom.lhs.name = "payPeriod";
    atom.op = CmpOp::Eq;
    atom.rhs.kind = Term::Kind::PeriodVar;
    return atom;
}

bool has_joined_per_period_param(const Env& env) {
    for (const auto& [name, bound] : env.tables) {
        (void)name;
        if (bound.isLearnParam && bound.keying == ParamKeying::PerPeriod && bound.timeJoined)
            return true;
    }
    return false;
}

// Resolved CASE condition: join conjuncts dropped, the period binding of a
// uniquely mapped parameter made explicit.
Formula guard_formula(const Env& env, const sql::BoolExpr& cond) {
    std::vector<Formula> conjuncts;
    if (has_joined_per_period_param(env))
        conjuncts.push_back(Formula::make(period_binding_atom()));

    auto add = [&](const sql::BoolExpr& node) {
        Formula f = translate(env, node);
        if (f.kind == Formula::Kind::Atom && is_tautological_join(*f.atom)) return;
        conjuncts.push_back(std::move(f));
    };
    if (cond.kind == sql::BoolExpr::Kind::And)
        for (const auto& child : cond.children) add(child);
    else
        add(cond);

    if (conjuncts.size() == 1) return conjuncts.front();
    Formula out;
    out.kind = Formula::Kind::And;
    out.children = std::move(conjuncts);
    return out;
}

bool formula_has_series_vs_param(const Formula& f) {
    if (f.kind == Formula::Kind::Atom) {
        const Atom& a = *f.atom;
        auto pair = [](const Term& x, const Term& y) {
            return x.kind == Term::Kind::Series && !calendar_attribute(x.name) &&
                   y.kind == Term::Kind::Param;
        };
        return pair(a.lhs, a.rhs) || pair(a.rhs, a.lhs);
    }
    return std::any_of(f.children.begin(), f.children.end(), formula_has_series_vs_param);
}

void collect_series(const Term& t, std::set<std::string, CiLess>& out) {
    if (t.kind == Term::Kind::Series) out.insert(t.name);
}

void collect_series(const Formula& f, std::set<std::string, CiLess>& out) {
    if (f.kind == Formula::Kind::Atom) {
        collect_series(f.atom->lhs, out);
        collect_series(f.atom->rhs, out);
        return;
    }
    for (const auto& child : f.children) collect_series(child, out);
}

bool term_depends_on_time(const Term& t) {
    return t.kind == Term::Kind::TimeVar || t.kind == Term::Kind::Series ||
           (t.kind == Term::Kind::Param && t.paramKey == ParamKeying::PerInterval);
}

bool formula_depends_on_time(const Formula& f) {
    if (f.kind == Formula::Kind::Atom)
        return term_depends_on_time(f.atom->lhs) || term_depends_on_time(f.atom->rhs);
    return std::any_of(f.children.begin(), f.children.end(), formula_depends_on_time);
}

const sql::TableRef* find_from_ref(const std::vector<sql::TableRef>& from,
                                   std::string_view binding) {
    for (const auto& ref : from)
        if (ci_equal(ref.binding(), binding)) return &ref;
    return nullptr;
}

const sql::SelectItem* find_case_item(const sql::Select& select) {
    for (const auto& item : select.items)
        if (std::holds_alternative<sql::CaseWhen>(item.value)) return &item;
    return nullptr;
}

}  // namespace

void Catalog::add(const sql::Statement& stmt) {
    if (std::holds_alternative<sql::CreateTable>(stmt)) {
        const auto& t = std::get<sql::CreateTable>(stmt);
        tables[t.name] = t;
    } else if (std::holds_alternative<sql::CreateView>(stmt)) {
        const auto& v = std::get<sql::CreateView>(stmt);
        views[v.name] = v;
    } else if (std::holds_alternative<sql::CreateEvent>(stmt)) {
        const auto& e = std::get<sql::CreateEvent>(stmt);
        events[e.name] = e;
    }
}

const sql::CreateTable* Catalog::find_table(std::string_view name) const {
    auto it = tables.find(name);
    return it == tables.end() ? nullptr : &it->second;
}

const sql::CreateView* Catalog::find_view(std::string_view name) const {
    auto it = views.find(name);
    return it == views.end() ? nullptr : &it->second;
}

const sql::CreateEvent* Catalog::find_event(std::string_view name) const {
    auto it = events.find(name);
    return it == events.end() ? nullptr : &it->second;
}

ViewCase analyze_view_case(const sql::CreateView& view, const Catalog& catalog) {
    const sql::SelectItem* item = find_case_item(view.select);
    if (!item)
        unsupported("view " + view.name + " has no CASE item");
    const auto& cw = std::get<sql::CaseWhen>(item->value);

    ViewCase out;
    out.viewName = view.name;
    out.caseAlias = item->alias;
    out.thenLiteral = cw.thenLiteral;
    out.elseLiteral = cw.elseLiteral;

    // An action view tests another view's Indicator column.
    if (cw.condition.kind == sql::BoolExpr::Kind::Cmp) {
        const sql::Comparison& cmp = *cw.condition.cmp;
        sql::ColumnRef ref;
        if (cmp.op == CmpOp::Eq && is_plain_column(cmp.lhs, ref) &&
            std::holds_alternative<std::string>(cmp.rhs) &&
            std::get<std::string>(cmp.rhs) == "1") {
            out.indicatorTest = ref;
            return out;
        }
    }

    Env env = build_env(view.select.from, catalog, nullptr);
    collect_joins(env, view.select.where);
    collect_joins(env, cw.condition);
    out.condition = guard_formula(env, cw.condition);
    return out;
}

PEInstance compile_event(const sql::CreateEvent& event, const Catalog& catalog) {
    PEInstance instance;

    for (const auto& name : event.learnParams) {
        const sql::CreateTable* table = catalog.find_table(name);
        if (!table) unresolved("learn parameter table '" + name + "' is not defined");
        BoundTable info;
        assign_columns(info, *table);
        if (info.valueCol.empty())
            unsupported("parameter table " + name + " has no value column");
        instance.parameterSets.push_back(
            {table->name,
             info.periodCol.empty() ? ParamKeying::PerInterval : ParamKeying::PerPeriod});
    }

    Env eventEnv = build_env(event.from, catalog, &event.learnParams);
    collect_joins(eventEnv, event.where);

    std::set<std::string, CiLess> seriesNames;

    for (const auto& clause : event.withClauses) {
        if (clause.guard) {
            const BoundTable* bound = eventEnv.find(clause.guard->qualifier);
            if (!bound)
                unresolved("unknown alias '" + clause.guard->qualifier + "' in WITH clause");
            const sql::CreateView* view = catalog.find_view(bound->tableName);
            if (!view)
                unsupported("implication guard " + bound->tableName + " is not a view");

            ViewCase vc = analyze_view_case(*view, catalog);
            if (!vc.condition)
                unsupported("view " + view->name +
                            " tests another Indicator and cannot guard a learning clause");
            if (!ci_equal(vc.caseAlias, "Indicator"))
                unsupported("view " + view->name + " CASE item is not named Indicator");

            // Re-analyze with the event's learn parameters in scope so that
            // parameter tables resolve as parameters, not input series.
            Env viewEnv = build_env(view->select.from, catalog, &event.learnParams);
            collect_joins(viewEnv, view->select.where);
            collect_joins(viewEnv, std::get<sql::CaseWhen>(find_case_item(view->select)->value)
                                       .condition);
            Formula guard = guard_formula(
                viewEnv,
                std::get<sql::CaseWhen>(find_case_item(view->select)->value).condition);

            ImplicationConstraint impl;
            impl.name = view->name;
            impl.guard = std::move(guard);
            // The inequality names the view's output columns through the
            // event alias; resolution dives into the view's select list.
            impl.consequent = resolve_comparison(eventEnv, clause.inequality);

            bool monitoring = formula_has_series_vs_param(impl.guard);
            impl.quantifier.overTime = true;
            impl.quantifier.periods =
                monitoring ? Quantifier::Periods::All : Quantifier::Periods::Future;

            collect_series(impl.guard, seriesNames);
            collect_series(Formula::make(impl.consequent), seriesNames);
            (monitoring ? instance.monitors : instance.globals).push_back(std::move(impl));
        } else {
            AtomicConstraint atomic;
            atomic.formula = Formula::make(resolve_comparison(eventEnv, clause.inequality));
            atomic.name = sql::print_comparison(clause.inequality);
            atomic.quantifier.overTime = formula_depends_on_time(atomic.formula);
            atomic.quantifier.periods = Quantifier::Periods::Future;
            collect_series(atomic.formula, seriesNames);
            instance.globals.push_back(std::move(atomic));
        }
    }

    if (instance.globals.empty() && instance.monitors.empty())
        unsupported("event " + event.name + " declares no constraints");

    // Objective: SUM over a column that must trace to rate * param[p].
    if (!find_from_ref(event.from, event.objective.summed.qualifier))
        unresolved("objective alias '" + event.objective.summed.qualifier +
                   "' is not in the event FROM list");
    sql::LinExpr summed;
    summed.column = event.objective.summed;
    Term objTerm = resolve_lin_expr(eventEnv, summed, 0);
    if (objTerm.kind != Term::Kind::Param)
        throw CompileError(CompileError::Kind::NonLinearObjective,
                           "objective does not trace to a decision parameter");
    const ParameterSet* objParam = instance.find_parameter(objTerm.name);
    if (!objParam || objParam->keying != ParamKeying::PerPeriod)
        throw CompileError(CompileError::Kind::NonLinearObjective,
                           "objective parameter must be a per-period learn parameter");
    if (objTerm.offset != 0.0 || objTerm.scale <= 0.0)
        throw CompileError(CompileError::Kind::NonLinearObjective,
                           "objective must be a positive multiple of the parameter");
    instance.objective.minimize = event.objective.minimize;
    instance.objective.rate = objTerm.scale;
    instance.objective.paramSet = objTerm.name;

    instance.inputSeries.assign(seriesNames.begin(), seriesNames.end());
    return instance;
}

}  // namespace mtsa::pe
