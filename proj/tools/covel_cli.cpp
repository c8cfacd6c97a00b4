// covel — command-line front end: identity checks, simulations, parallel
// transport, reduction pipelines, and variation checks from dotted-key
// config files. Reports go to --out as JSON; diagnostics go to stderr.
//
// Exit codes: 0 pass, 1 numeric failure, 2 config/parse error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "covel/scenario.hpp"

namespace {

std::string derivedCsvPath(const std::string& reportPath) {
    const auto dot = reportPath.find_last_of('.');
    const auto slash = reportPath.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return reportPath + ".csv";
    return reportPath.substr(0, dot) + ".csv";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"covel: covariant Euler-Lagrange verification engine"};
    app.require_subcommand(0, 1);

    bool listCatalog = false;
    app.add_flag("--list-catalog", listCatalog, "print the built-in catalog keys and exit");

    std::string configPath;
    std::string outPath;
    long long seed = 0;
    bool seedGiven = false;

    const char* const kTasks[] = {"check-identity", "simulate", "transport", "reduce", "variation-check"};
    const char* const kDescriptions[] = {
        "compare covariant and coordinate Euler-Lagrange residuals on random jets",
        "integrate the Euler-Lagrange equations and report energy drift",
        "parallel-transport a vector along a path; report holonomy for closed loops",
        "run the Kaluza-Klein reduction equivalence pipeline",
        "compare the action's finite-difference variation against the residual pairing",
    };
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(kTasks[i], kDescriptions[i]);
        sub->add_option("--config", configPath, "scenario config file")->required();
        sub->add_option("--out", outPath, "report path ('-' for stdout)");
        sub->add_option("--seed", seed, "override numeric.seed")->each([&](const std::string&) { seedGiven = true; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (listCatalog) {
        std::cout << covel::describeCatalog();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "covel: no task given (see --help)" << std::endl;
        return 2;
    }
    const std::string task = app.get_subcommands().front()->get_name();

    try {
        covel::ConfigMap cm = covel::ConfigMap::parseFile(configPath);
        if (seedGiven) cm.set("numeric.seed", std::to_string(seed));
        covel::ScenarioConfig sc = covel::ScenarioConfig::fromConfig(std::move(cm), task);

        const std::string reportPath = outPath.empty() ? sc.raw.getString("output.report", "-") : outPath;
        covel::ScenarioResult res = covel::runScenario(sc);

        const std::string json = res.report.pretty();
        if (reportPath == "-") std::cout << json;
        else covel::writeFile(reportPath, json);

        if (res.trajectoryCsvContent) {
            std::string csvPath = sc.raw.getString("output.trajectory", "");
            if (csvPath.empty() && reportPath != "-") csvPath = derivedCsvPath(reportPath);
            if (!csvPath.empty()) covel::writeFile(csvPath, *res.trajectoryCsvContent);
            else std::cerr << "covel: no trajectory path (set output.trajectory or --out <file>)" << std::endl;
        }

        std::cerr << "covel: " << sc.name << " [" << task << "] " << (res.pass ? "pass" : "FAIL") << std::endl;
        return res.pass ? 0 : 1;
    } catch (const covel::ParseError& e) {
        std::cerr << "covel: parse error: " << e.what() << std::endl;
        return 2;
    } catch (const covel::ConfigError& e) {
        std::cerr << "covel: config error: " << e.what() << std::endl;
        return 2;
    } catch (const covel::Error& e) {
        std::cerr << "covel: error in scenario: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "covel: unexpected error: " << e.what() << std::endl;
        return 1;
    }
}
