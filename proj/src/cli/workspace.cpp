#include "mtsa/cli/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "mtsa/csv.hpp"
#include "mtsa/dialect/parser.hpp"
#include "mtsa/dialect/printer.hpp"
#include "mtsa/pe/emit.hpp"
#include "mtsa/pe/ground.hpp"
#include "mtsa/scripts.hpp"

namespace mtsa::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WorkspaceError("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, std::string_view text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw WorkspaceError("cannot write " + path.string());
    out << text;
}

constexpr const char* kConfigFile = "mtsa.toml";
constexpr const char* kCatalogFile = "catalog.json";

// One workspace mutator at a time; reentrant within a thread so nested
// operations (a script statement calling solve) share the hold.
class WorkspaceLock {
public:
    explicit WorkspaceLock(const fs::path& root) : path_(root / ".lock") {
        int& depth = depths()[path_.string()];
        if (depth > 0) {
            ++depth;
            held_ = true;
            return;
        }
        fs::create_directories(root);
        int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
            throw WorkspaceError("workspace is locked (" + path_.string() +
                                 " exists; remove it if stale)");
        std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] ssize_t n = ::write(fd, pid.data(), pid.size());
        ::close(fd);
        ++depth;
        held_ = true;
        owner_ = true;
    }

    ~WorkspaceLock() {
        if (!held_) return;
        int& depth = depths()[path_.string()];
        if (--depth == 0 && owner_) ::unlink(path_.c_str());
    }

    WorkspaceLock(const WorkspaceLock&) = delete;
    WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
    static std::map<std::string, int>& depths() {
        thread_local std::map<std::string, int> map;
        return map;
    }
    fs::path path_;
    bool held_ = false;
    bool owner_ = false;
};

std::string config_text(const Workspace& ws) {
    std::ostringstream out;
    out << "# workspace configuration\n"
        << "annualBound = " << format_number(ws.config.annualBound) << "\n"
        << "timeIntervalSize = " << format_number(ws.config.timeIntervalSize) << "\n"
        << "horizonYears = " << ws.config.horizonYears << "\n"
        << "tolerance = " << format_number(ws.config.tolerance) << "\n"
        << "gridStep = " << format_number(ws.config.gridStep) << "\n"
        << "maxExhaustiveCombos = " << ws.config.maxExhaustiveCombos << "\n"
        << "refinementIters = " << ws.config.refinementIters << "\n"
        << "solver = " << solver_choice_name(ws.solver) << "\n";
    if (ws.streamFile) out << "streamFile = " << *ws.streamFile << "\n";
    return out.str();
}

void parse_config(Workspace& ws, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                s.remove_suffix(1);
            return s;
        };
        view = trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw WorkspaceError("mtsa.toml line " + std::to_string(lineNo) +
                                 ": expected key = value");
        std::string key(trim(view.substr(0, eq)));
        std::string value(trim(view.substr(eq + 1)));
        try {
            if (ci_equal(key, "annualBound"))
                ws.config.annualBound = std::stod(value);
            else if (ci_equal(key, "timeIntervalSize"))
                ws.config.timeIntervalSize = std::stod(value);
            else if (ci_equal(key, "horizonYears"))
                ws.config.horizonYears = std::stoi(value);
            else if (ci_equal(key, "tolerance"))
                ws.config.tolerance = std::stod(value);
            else if (ci_equal(key, "gridStep"))
                ws.config.gridStep = std::stod(value);
            else if (ci_equal(key, "maxExhaustiveCombos"))
                ws.config.maxExhaustiveCombos = std::stoll(value);
            else if (ci_equal(key, "refinementIters"))
                ws.config.refinementIters = std::stoi(value);
            else if (ci_equal(key, "solver"))
                ws.solver = parse_solver_choice(value);
            else if (ci_equal(key, "streamFile"))
                ws.streamFile = value;
            else
                throw WorkspaceError("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw WorkspaceError("mtsa.toml line " + std::to_string(lineNo) +
                                 ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw WorkspaceError("mtsa.toml line " + std::to_string(lineNo) +
                                 ": value out of range for " + key);
        }
    }
}

void load_catalog(Workspace& ws) {
    fs::path path = ws.root / kCatalogFile;
    if (!fs::exists(path)) return;
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    for (const auto& text : j.at("statements")) {
        std::string s = text.get<std::string>();
        for (const auto& stmt : sql::parse_script(s)) ws.catalog.add(stmt);
        ws.statements.push_back(s);
    }
}

// Replaces a previous definition of the same name, keeping script order.
void upsert_statement(Workspace& ws, const sql::Statement& stmt) {
    ws.catalog.add(stmt);
    std::string text = sql::pretty_print(stmt);
    auto nameOf = [](const sql::Statement& s) -> std::string {
        if (std::holds_alternative<sql::CreateTable>(s))
            return "table:" + to_lower(std::get<sql::CreateTable>(s).name);
        if (std::holds_alternative<sql::CreateView>(s))
            return "view:" + to_lower(std::get<sql::CreateView>(s).name);
        return "event:" + to_lower(std::get<sql::CreateEvent>(s).name);
    };
    std::string key = nameOf(stmt);
    for (auto& existing : ws.statements) {
        auto parsed = sql::parse_script(existing);
        if (parsed.size() == 1 && nameOf(parsed.front()) == key) {
            existing = text;
            return;
        }
    }
    ws.statements.push_back(text);
}

std::string statement_kind(const sql::Statement& stmt) {
    if (std::holds_alternative<sql::CreateTable>(stmt)) return "table";
    if (std::holds_alternative<sql::CreateView>(stmt)) return "view";
    if (std::holds_alternative<sql::CreateEvent>(stmt)) return "event";
    if (std::holds_alternative<sql::MonitorStmt>(stmt)) return "monitor";
    return "execute";
}

std::string statement_name(const sql::Statement& stmt) {
    if (std::holds_alternative<sql::CreateTable>(stmt))
        return std::get<sql::CreateTable>(stmt).name;
    if (std::holds_alternative<sql::CreateView>(stmt))
        return std::get<sql::CreateView>(stmt).name;
    if (std::holds_alternative<sql::CreateEvent>(stmt))
        return std::get<sql::CreateEvent>(stmt).name;
    if (std::holds_alternative<sql::MonitorStmt>(stmt))
        return std::get<sql::MonitorStmt>(stmt).viewName;
    return std::get<sql::ExecuteStmt>(stmt).eventName;
}

// Broadcast a per-period table over the future intervals, one row per time.
std::string per_period_csv(const pe::GroundInstance& g,
                           const std::map<PeriodIndex, double>& values) {
    std::ostringstream out;
    out << "time,period,value\n";
    for (TimeIndex t : g.futureTimes) {
        PeriodIndex p = g.calendar.row(t).payPeriod;
        out << t << ',' << p << ',' << format_number(values.at(p)) << '\n';
    }
    return out.str();
}

std::string per_interval_csv(const std::map<TimeIndex, double>& values) {
    std::ostringstream out;
    out << "time,value\n";
    for (const auto& [t, v] : values) out << t << ',' << format_number(v) << '\n';
    return out.str();
}

}  // namespace

std::string_view solver_choice_name(SolverChoice choice) {
    switch (choice) {
        case SolverChoice::ZeroBudget: return "zero_budget";
        case SolverChoice::Breakpoints: return "breakpoints";
        case SolverChoice::LocalSearch: return "local_search";
    }
    return "breakpoints";
}

SolverChoice parse_solver_choice(std::string_view name) {
    if (ci_equal(name, "zero_budget")) return SolverChoice::ZeroBudget;
    if (ci_equal(name, "breakpoints")) return SolverChoice::Breakpoints;
    if (ci_equal(name, "local_search")) return SolverChoice::LocalSearch;
    throw WorkspaceError("unknown solver '" + std::string(name) +
                         "'; expected zero_budget, breakpoints, or local_search");
}

Workspace init_workspace(const fs::path& root) {
    Workspace ws;
    ws.root = root;
    fs::create_directories(root);
    fs::create_directories(ws.data_dir());
    fs::create_directories(ws.params_dir());
    fs::create_directories(ws.exports_dir());
    fs::create_directories(ws.logs_dir());
    write_file(root / kConfigFile, config_text(ws));
    write_file(root / "learn_peak_demand.mtsa", scripts::kPeakDemandLearnScript);
    write_file(root / "monitor_peak_demand.mtsa", scripts::kPeakDemandMonitorScript);
    save_catalog(ws);
    return ws;
}

Workspace open_workspace(const fs::path& root) {
    Workspace ws;
    ws.root = root;
    if (!fs::exists(root)) throw WorkspaceError("workspace " + root.string() + " not found");
    fs::path config = root / kConfigFile;
    if (fs::exists(config)) parse_config(ws, read_file(config));
    load_catalog(ws);
    return ws;
}

void save_catalog(const Workspace& ws) {
    nlohmann::json j;
    j["statements"] = ws.statements;
    write_file(ws.root / kCatalogFile, j.dump(2) + "\n");
}

DataStore load_store(const Workspace& ws) {
    DataStore store;
    fs::path calendarPath = ws.data_dir() / "calendar.csv";
    if (fs::exists(calendarPath)) store.calendar = load_calendar(read_file(calendarPath));
    if (fs::exists(ws.data_dir()))
        for (const auto& entry : fs::directory_iterator(ws.data_dir())) {
            if (entry.path().extension() != ".csv") continue;
            std::string name = entry.path().stem().string();
            if (ci_equal(name, "calendar")) continue;
            try {
                store.series[name] = load_series(read_file(entry.path()), name);
            } catch (const CsvError& e) {
                throw WorkspaceError(entry.path().string() + ": " + e.what());
            }
        }
    return store;
}

fs::path register_data(Workspace& ws, const fs::path& csv, const std::string& name) {
    WorkspaceLock lock(ws.root);
    if (name.empty() || name.find('/') != std::string::npos ||
        name.find('\\') != std::string::npos || name.find("..") != std::string::npos)
        throw WorkspaceError("'" + name + "' is not a valid table name");
    std::string text = read_file(csv);
    fs::path dest;
    if (ci_equal(name, "calendar")) {
        CalendarTable cal = load_calendar(text);
        ValidationReport report = validate_calendar(cal);
        if (!report.ok())
            throw WorkspaceError("calendar invalid: " + report.issues.front().message +
                                 (report.issues.size() > 1
                                      ? " (+" + std::to_string(report.issues.size() - 1) +
                                            " more)"
                                      : ""));
        dest = ws.data_dir() / "calendar.csv";
        write_file(dest, serialize_calendar(cal));
    } else {
        TimeSeries series = load_series(text, name);
        dest = ws.data_dir() / (name + ".csv");
        write_file(dest, serialize_series(series));
    }
    return dest;
}

bool RunReport::ok() const {
    for (const auto& s : statements)
        if (!s.ok) return false;
    return true;
}

std::string RunReport::to_text() const {
    std::ostringstream out;
    for (const auto& s : statements) {
        out << "[" << s.index << "] " << (s.ok ? "ok    " : "error ") << s.kind << " "
            << s.name;
        if (s.objective) out << " objective=" << format_number(*s.objective);
        if (!s.message.empty()) out << ": " << s.message;
        out << " (" << format_number(s.millis) << " ms)\n";
    }
    return out.str();
}

std::string RunReport::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : statements) {
        nlohmann::json e;
        e["index"] = s.index;
        e["kind"] = s.kind;
        e["name"] = s.name;
        e["ok"] = s.ok;
        if (!s.message.empty()) e["message"] = s.message;
        if (s.objective) e["objective"] = *s.objective;
        e["millis"] = s.millis;
        j.push_back(e);
    }
    return j.dump(2);
}

pe::GroundInstance ground_event(Workspace& ws, const std::string& eventName) {
    const sql::CreateEvent* event = ws.catalog.find_event(eventName);
    if (!event) throw UnknownEventError("unknown event '" + eventName + "'");
    pe::PEInstance instance = pe::compile_event(*event, ws.catalog);
    DataStore store = load_store(ws);
    return pe::ground(instance, store, ws.config);
}

solver::Solution solve_event(Workspace& ws, const std::string& eventName) {
    WorkspaceLock lock(ws.root);
    pe::GroundInstance g = ground_event(ws, eventName);

    solver::Solution solution;
    switch (ws.solver) {
        case SolverChoice::ZeroBudget:
            solution = solver::solve_zero_budget(g);
            break;
        case SolverChoice::Breakpoints:
            solution = solver::solve_breakpoints(g, ws.config);
            break;
        case SolverChoice::LocalSearch: {
            // Seed at the per-period demand peaks: always feasible (no shed).
            std::vector<double> seedBounds(g.futurePeriods.size(), 0.0);
            for (TimeIndex t : g.futureTimes) {
                int idx = g.period_index(g.calendar.row(t).payPeriod);
                seedBounds[idx] = std::max(seedBounds[idx], g.demand_at(t));
            }
            solver::Evaluation ev = solver::evaluate(g, seedBounds);
            solver::Solution seed;
            seed.status = solver::SolveStatus::Feasible;
            seed.objective = ev.objective;
            seed.shedTotal = ev.shedTotal;
            seed.meter = ev.meter;
            seed.supply = ev.supply;
            for (std::size_t i = 0; i < g.futurePeriods.size(); ++i)
                seed.bounds[g.futurePeriods[i]] = seedBounds[i];
            solution = solver::local_search(g, seed, ws.config);
            break;
        }
    }

    if (!g.boundParam.empty())
        write_file(ws.params_dir() / (g.boundParam + ".csv"),
                   per_period_csv(g, solution.bounds));
    write_file(ws.params_dir() / (g.supplyParam + ".csv"),
               per_period_csv(g, solution.supply));
    if (!g.meterParam.empty())
        write_file(ws.params_dir() / (g.meterParam + ".csv"),
                   per_interval_csv(solution.meter));
    write_file(ws.root / "solution.json", solver::solution_to_json(solution) + "\n");
    return solution;
}

fs::path export_model(Workspace& ws, const std::string& eventName,
                      const std::string& format) {
    WorkspaceLock lock(ws.root);
    pe::GroundInstance g = ground_event(ws, eventName);
    if (ci_equal(format, "opl")) {
        pe::OplExport opl = pe::emit_opl(g);
        fs::path model = ws.exports_dir() / (eventName + ".mod");
        write_file(model, opl.model);
        write_file(ws.exports_dir() / (eventName + ".dat"), opl.data);
        return model;
    }
    if (ci_equal(format, "milp")) {
        fs::path model = ws.exports_dir() / (eventName + ".lp");
        write_file(model, pe::emit_milp(g, pe::default_big_m(g)));
        return model;
    }
    throw WorkspaceError("unknown export format '" + format + "'; expected opl or milp");
}

namespace {

monitor::MonitoringRule build_rule(Workspace& ws, const std::string& viewName) {
    monitor::RuleShape shape = monitor::resolve_rule_shape(viewName, ws.catalog);
    fs::path paramPath = ws.params_dir() / (shape.paramName + ".csv");
    if (!fs::exists(paramPath))
        throw monitor::MonitorError(monitor::MonitorError::Kind::MissingParameter,
                                    "no learned table at " + paramPath.string() +
                                        "; run the learning event first");
    DecisionParameterTable params = load_parameter_table(
        read_file(paramPath), shape.paramName, ParamKeying::PerPeriod);
    DataStore store = load_store(ws);
    return monitor::compile_monitor(viewName, ws.catalog, params, store.calendar);
}

}  // namespace

MonitorSummary monitor_view(Workspace& ws, const std::string& viewName,
                            std::string_view streamText, std::ostream* echo) {
    WorkspaceLock lock(ws.root);
    monitor::MonitoringRule rule = build_rule(ws, viewName);

    std::vector<monitor::StreamRecord> records = monitor::parse_stream(streamText);
    fs::create_directories(ws.logs_dir());
    std::ofstream log(ws.logs_dir() / "recommendations.jsonl", std::ios::app);

    MonitorSummary summary;
    summary.log = ws.logs_dir() / "recommendations.jsonl";
    auto recs = monitor::replay(rule, records, &log);
    summary.records = recs.size();
    for (const auto& rec : recs) {
        if (rec.indicator == 1) {
            ++summary.triggered;
            if (echo) *echo << monitor::recommendation_to_json(rec) << '\n';
        }
    }
    return summary;
}

MonitorSummary monitor_follow(Workspace& ws, const std::string& viewName, std::istream& in,
                              std::ostream* echo) {
    WorkspaceLock lock(ws.root);
    monitor::MonitoringRule rule = build_rule(ws, viewName);

    fs::create_directories(ws.logs_dir());
    std::ofstream log(ws.logs_dir() / "recommendations.jsonl", std::ios::app);

    MonitorSummary summary;
    summary.log = ws.logs_dir() / "recommendations.jsonl";
    std::string line;
    bool first = true;
    TimeIndex lastTime = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto records = monitor::parse_stream(line);
        if (records.empty()) continue;  // a lone header line
        monitor::StreamRecord record = records.front();
        if (!first && record.time <= lastTime)
            throw monitor::MonitorError(monitor::MonitorError::Kind::UnorderedStream,
                                        "record at time " + std::to_string(record.time) +
                                            " is not after " + std::to_string(lastTime));
        monitor::Recommendation rec = monitor::step(rule, record);
        log << monitor::recommendation_to_json(rec) << '\n';
        log.flush();
        ++summary.records;
        if (rec.indicator == 1) {
            ++summary.triggered;
            if (echo) *echo << monitor::recommendation_to_json(rec) << std::endl;
        }
        lastTime = record.time;
        first = false;
    }
    return summary;
}

RunReport execute_script(Workspace& ws, std::string_view scriptText) {
    WorkspaceLock lock(ws.root);
    RunReport report;
    std::vector<sql::Statement> statements;
    try {
        statements = sql::parse_script(scriptText);
    } catch (const Error& e) {
        report.statements.push_back({0, "script", "", false, e.what(), std::nullopt, 0.0});
        return report;
    }

    int index = 0;
    for (const auto& stmt : statements) {
        ++index;
        StatementReport entry;
        entry.index = index;
        entry.kind = statement_kind(stmt);
        entry.name = statement_name(stmt);
        auto start = std::chrono::steady_clock::now();
        try {
            if (std::holds_alternative<sql::MonitorStmt>(stmt)) {
                if (!ws.streamFile)
                    throw WorkspaceError(
                        "MONITOR needs streamFile in mtsa.toml (or use the monitor command)");
                std::string streamText = read_file(ws.root / *ws.streamFile);
                MonitorSummary summary = monitor_view(
                    ws, std::get<sql::MonitorStmt>(stmt).viewName, streamText);
                entry.message = std::to_string(summary.triggered) + " of " +
                                std::to_string(summary.records) + " records triggered";
            } else if (std::holds_alternative<sql::ExecuteStmt>(stmt)) {
                solver::Solution solution =
                    solve_event(ws, std::get<sql::ExecuteStmt>(stmt).eventName);
                entry.objective = solution.objective;
            } else {
                upsert_statement(ws, stmt);
                save_catalog(ws);
            }
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.message = e.what();
        }
        entry.millis = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        report.statements.push_back(entry);
        if (!entry.ok) break;
    }
    return report;
}

}  // namespace mtsa::cli
