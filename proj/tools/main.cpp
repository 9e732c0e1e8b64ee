#include "specrad/driver.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args;
    std::string output_dir;
    bool want_summary = false;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--output" && i + 1 < argc) {
            output_dir = argv[++i];
        } else if (a == "--summary") {
            want_summary = true;
        } else {
            args.push_back(a);
        }
    }

    specrad::cli::RunResult res = specrad::cli::run(args);
    std::cout << res.table;
    if (want_summary && !res.summary_json.empty()) std::cout << res.summary_json << "\n";

    if (!output_dir.empty()) {
        std::filesystem::create_directories(output_dir);
        for (const auto& [name, content] : res.artifacts) {
            std::ofstream out(output_dir + "/" + name);
            out << content;
        }
        if (!res.summary_json.empty()) {
            std::ofstream out(output_dir + "/summary.json");
            out << res.summary_json << "\n";
        }
    }
    return res.exit_code;
}
