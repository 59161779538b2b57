#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/monitor/monitor.hpp"
#include "mtsa/pe/compiler.hpp"
#include "mtsa/solver/solver.hpp"

namespace mtsa::cli {

class WorkspaceError : public Error {
public:
    using Error::Error;
};

enum class SolverChoice { ZeroBudget, Breakpoints, LocalSearch };

std::string_view solver_choice_name(SolverChoice choice);
SolverChoice parse_solver_choice(std::string_view name);

// A workspace directory: config, catalog, data CSVs, learned parameters,
// exports, and the recommendation log.
struct Workspace {
    std::filesystem::path root;
    SolverConfig config;
    SolverChoice solver = SolverChoice::Breakpoints;
    std::optional<std::string> streamFile;
    pe::Catalog catalog;
    std::vector<std::string> statements;  // catalog statements, canonical text

    std::filesystem::path data_dir() const { return root / "data"; }
    std::filesystem::path params_dir() const { return root / "params"; }
    std::filesystem::path exports_dir() const { return root / "exports"; }
    std::filesystem::path logs_dir() const { return root / "logs"; }
};

// Creates the directory skeleton, a default config, and the bundled peak
// demand scripts.
Workspace init_workspace(const std::filesystem::path& root);

Workspace open_workspace(const std::filesystem::path& root);
void save_catalog(const Workspace& ws);

// Loads the calendar plus every registered series from data/.
DataStore load_store(const Workspace& ws);

// Copies a CSV into the workspace under the given table name ("calendar"
// registers the calendar file). Returns the destination path.
std::filesystem::path register_data(Workspace& ws, const std::filesystem::path& csv,
                                    const std::string& name);

struct StatementReport {
    int index = 0;
    std::string kind;
    std::string name;
    bool ok = true;
    std::string message;
    std::optional<double> objective;
    double millis = 0.0;
};

struct RunReport {
    std::vector<StatementReport> statements;

    bool ok() const;
    std::string to_text() const;
    std::string to_json() const;
};

// Runs a script against the workspace. CREATE statements update the catalog
// (persisted after each statement), EXECUTE learns and stores parameters,
// MONITOR replays the configured stream file. Execution stops at the first
// failing statement; earlier statements stay committed.
RunReport execute_script(Workspace& ws, std::string_view scriptText);

// Compile + ground + solve one event; writes parameter CSVs and
// solution.json into the workspace.
solver::Solution solve_event(Workspace& ws, const std::string& eventName);

// Writes the OPL (.mod/.dat) or LP export for an event; returns the model path.
std::filesystem::path export_model(Workspace& ws, const std::string& eventName,
                                   const std::string& format);

struct MonitorSummary {
    std::size_t records = 0;
    std::size_t triggered = 0;
    std::filesystem::path log;
};

// Replays a stream (CSV text) through the MONITOR'd view; appends one JSON
// line per record to the recommendation log.
MonitorSummary monitor_view(Workspace& ws, const std::string& viewName,
                            std::string_view streamText, std::ostream* echo = nullptr);

// Follow mode: consumes line-delimited records as they arrive, logging and
// echoing triggered recommendations immediately.
MonitorSummary monitor_follow(Workspace& ws, const std::string& viewName, std::istream& in,
                              std::ostream* echo = nullptr);

pe::GroundInstance ground_event(Workspace& ws, const std::string& eventName);

class UnknownEventError : public Error {
public:
    using Error::Error;
};

}  // namespace mtsa::cli
