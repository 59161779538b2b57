#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtsa/cli/demo.hpp"
#include "mtsa/cli/workspace.hpp"
#include "mtsa/csv.hpp"
#include "mtsa/solver/solver.hpp"

namespace {

std::string slurp(std::istream& in) {
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mtsa::Error("cannot read " + path);
    return slurp(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate time series analytics: peak demand learning and monitoring"};
    app.require_subcommand(1);

    std::string workspacePath = ".";
    app.add_option("-w,--workspace", workspacePath, "workspace directory")
        ->capture_default_str();
    bool jsonOut = false;
    app.add_flag("--json", jsonOut, "machine-readable reports");
    std::uint64_t seed = 7;
    app.add_option("--seed", seed, "seed for generated data (demo only)");

    auto* init = app.add_subcommand("init", "create a workspace skeleton");
    bool demo = false;
    init->add_flag("--demo", demo, "include three years of synthetic hourly demand");

    auto* run = app.add_subcommand("run", "run an .mtsa script against the workspace");
    std::string scriptPath;
    run->add_option("script", scriptPath, "script file")->required();

    auto* solve = app.add_subcommand("solve", "learn parameters for one event");
    std::string eventName;
    solve->add_option("event", eventName, "event name")->required();

    auto* exportCmd = app.add_subcommand("export", "write the optimization model for an event");
    std::string exportEvent, format = "opl";
    exportCmd->add_option("event", exportEvent, "event name")->required();
    exportCmd->add_option("--format", format, "opl or milp")->capture_default_str();

    auto* monitorCmd = app.add_subcommand("monitor", "replay a stream through a view");
    std::string viewName, streamPath = "-";
    monitorCmd->add_option("view", viewName, "monitoring view")->required();
    monitorCmd->add_option("--stream", streamPath, "CSV stream file, or - for stdin")
        ->capture_default_str();

    auto* load = app.add_subcommand("load", "register a CSV in the workspace");
    std::string csvPath, asName;
    load->add_option("csv", csvPath, "source CSV file")->required();
    load->add_option("--as", asName, "table name, or 'calendar'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (init->parsed()) {
            mtsa::cli::Workspace ws = demo
                                          ? mtsa::cli::write_demo_workspace(workspacePath, seed)
                                          : mtsa::cli::init_workspace(workspacePath);
            std::cout << "initialized workspace at " << ws.root.string() << "\n";
            return 0;
        }

        mtsa::cli::Workspace ws = mtsa::cli::open_workspace(workspacePath);

        if (run->parsed()) {
            mtsa::cli::RunReport report =
                mtsa::cli::execute_script(ws, read_text_file(scriptPath));
            std::cout << (jsonOut ? report.to_json() + "\n" : report.to_text());
            return report.ok() ? 0 : 1;
        }
        if (solve->parsed()) {
            mtsa::solver::Solution solution = mtsa::cli::solve_event(ws, eventName);
            if (jsonOut)
                std::cout << mtsa::solver::solution_to_json(solution) << "\n";
            else
                std::cout << "objective " << mtsa::format_number(solution.objective)
                          << ", parameters written to "
                          << (ws.params_dir()).string() << "\n";
            return 0;
        }
        if (exportCmd->parsed()) {
            auto path = mtsa::cli::export_model(ws, exportEvent, format);
            std::cout << path.string() << "\n";
            return 0;
        }
        if (monitorCmd->parsed()) {
            mtsa::cli::MonitorSummary summary;
            if (streamPath == "-")
                summary = mtsa::cli::monitor_follow(ws, viewName, std::cin, &std::cout);
            else
                summary = mtsa::cli::monitor_view(ws, viewName,
                                                  read_text_file(streamPath), &std::cout);
            std::cerr << summary.triggered << " of " << summary.records
                      << " records triggered; log: " << summary.log.string() << "\n";
            return 0;
        }
        if (load->parsed()) {
            auto dest = mtsa::cli::register_data(ws, csvPath, asName);
            std::cout << dest.string() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
