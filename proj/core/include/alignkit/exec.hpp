#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "alignkit/extract.hpp"

namespace alignkit {

enum class ExecStatus { ok, error, timeout };

const char* exec_status_name(ExecStatus s);

struct ExecutionResult {
    std::string stdout_text;
    std::string stderr_text;
    std::string value;  // printed value of the last line's assigned variable
    ExecStatus status = ExecStatus::error;
};

struct ExecutorConfig {
    std::vector<std::string> command = {"python3"};  // interpreter argv
    double timeout_secs = 10.0;
    size_t max_output_bytes = 1 << 20;
    // Scripts run inside a fresh temp dir unless a working dir is given.
    std::optional<std::filesystem::path> workdir;
};

// Executes a code block in an external interpreter. A wrapper script is
// generated: the block itself plus a final print of the variable assigned on
// the block's last line (when that line is a simple or augmented assignment
// to one name). The interpreter gets the script as a temp-file argument and
// must leave the answer as the last non-empty stdout line.
ExecutionResult run_program(const CodeBlock& block, const ExecutorConfig& cfg);

}  // namespace alignkit
