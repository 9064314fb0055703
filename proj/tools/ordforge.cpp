// ordforge: run scripts and invariant suites, print a text or JSON report.
//
// Exit status: 0 when every check holds, 1 when some check fails, 2 on
// usage, input or parse errors.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordforge/runner.hpp"

namespace {

bool read_source(const std::string& path, std::string& out) {
    if (path == "-") {
        out.assign(std::istreambuf_iterator<char>(std::cin), {});
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    out.assign(std::istreambuf_iterator<char>(in), {});
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale checks for countable models, forcing, creatures and trees"};
    std::vector<std::string> files;
    bool json = false;
    bool print_only = false;
    std::string suite;
    ordforge::RunOptions opt;
    app.add_option("files", files, "Script files; '-' reads standard input");
    app.add_flag("--json", json, "Emit the JSON report");
    app.add_option("--size", opt.size, "Exhaustion bound for suites")->capture_default_str();
    app.add_option("--seed", opt.seed, "Seed for randomized instances")->capture_default_str();
    app.add_option("--suite", suite, "Run an invariant suite: all, kernel, forcing, creature or tree");
    app.add_flag("--print", print_only, "Parse the scripts and print them in canonical form");
    CLI11_PARSE(app, argc, argv);
    opt.max_carrier = ordforge::RunOptions::max_carrier_from_env();

    std::string source;
    for (const std::string& f : files) {
        std::string text;
        if (!read_source(f, text)) {
            std::cerr << f << ": cannot read file\n";
            return 2;
        }
        try {
            ordforge::dsl::parse(text);
        } catch (const ordforge::dsl::ParseError& e) {
            std::cerr << f << ":" << e.what() << "\n";
            return 2;
        }
        source += text;
        if (!source.empty() && source.back() != '\n') source += '\n';
    }
    if (!suite.empty()) {
        if (suite != "all" && std::find(ordforge::suites::names().begin(), ordforge::suites::names().end(), suite) ==
                                  ordforge::suites::names().end()) {
            std::cerr << "unknown suite '" << suite << "'\n";
            return 2;
        }
        source += "suite " + suite + ";\n";
    }

    ordforge::dsl::Script script;
    try {
        script = ordforge::dsl::parse(source);
    } catch (const ordforge::dsl::ParseError& e) {
        // Each file parsed alone, so this is a clash between files.
        std::cerr << "combined input:" << e.what() << "\n";
        return 2;
    }
    if (print_only) {
        std::cout << ordforge::dsl::print(script);
        return 0;
    }
    ordforge::Report report = ordforge::Runner(opt).run(script);
    std::cout << (json ? report.json_text() : report.text());
    return report.all_hold() ? 0 : 1;
}
