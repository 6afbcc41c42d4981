#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uict/cli/table.hpp"

namespace uict::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_io = 4,
};

struct RunResult {
    int exit_code = exit_ok;
    std::string error;
    std::string manifest_hash;
    std::filesystem::path output_dir;
    std::vector<std::filesystem::path> files;
    std::vector<Table> tables;

    const Table& table(std::string_view name) const;
    bool ok() const noexcept { return exit_code == exit_ok; }
};

// Runs one command line, e.g. {"exact", "--table", "girth", "--n", "1..5"}.
// Tables are written under the output directory (--out, else $UICT_OUTPUT_DIR,
// else the working directory) and echoed to `out` unless --quiet is given.
RunResult execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uict::cli
