#include "alignkit/exec.hpp"

#include <fstream>
#include <regex>

#include "alignkit/error.hpp"
#include "alignkit/subprocess.hpp"

namespace alignkit {

namespace {

std::string last_nonempty_line(const std::string& text) {
    size_t end = text.find_last_not_of(" \t\r\n");
    if (end == std::string::npos) return {};
    size_t begin = text.rfind('\n', end);
    begin = begin == std::string::npos ? 0 : begin + 1;
    std::string line = text.substr(begin, end - begin + 1);
    size_t first = line.find_first_not_of(" \t");
    return first == std::string::npos ? std::string{} : line.substr(first);
}

// Name assigned on the block's final line, for simple and augmented
// assignments to a single identifier. Tuple targets and subscripts get no
// epilog; such blocks must print their own answer.
std::optional<std::string> last_assigned_name(const std::string& source) {
    static const std::regex assign_re(
        R"(^\s*([A-Za-z_]\w*)\s*(?:[+\-*/%@&|^]|//|\*\*|>>|<<)?=(?![=]).*$)");
    std::string line = last_nonempty_line(source);
    std::smatch m;
    if (std::regex_match(line, m, assign_re)) {
        return m[1].str();
    }
    return std::nullopt;
}

}  // namespace

const char* exec_status_name(ExecStatus s) {
    switch (s) {
        case ExecStatus::ok: return "ok";
        case ExecStatus::error: return "error";
        case ExecStatus::timeout: return "timeout";
    }
    return "?";
}

ExecutionResult run_program(const CodeBlock& block, const ExecutorConfig& cfg) {
    if (cfg.command.empty()) {
        throw Error("executor config has an empty command");
    }

    std::string script = block.source;
    if (!script.empty() && script.back() != '\n') script += '\n';
    if (auto name = last_assigned_name(block.source)) {
        script += "print(" + *name + ")\n";
    }

    std::optional<TempDir> scratch;
    std::filesystem::path workdir;
    if (cfg.workdir) {
        workdir = *cfg.workdir;
    } else {
        scratch.emplace("alignkit-exec-");
        workdir = scratch->path();
    }

    auto script_path = workdir / "snippet.py";
    {
        std::ofstream out(script_path, std::ios::binary);
        if (!out) throw Error("cannot write " + script_path.string());
        out << script;
    }

    std::vector<std::string> argv = cfg.command;
    argv.push_back(script_path.string());
    CommandResult run = run_command(argv, "", cfg.timeout_secs,
                                    cfg.max_output_bytes, workdir);

    ExecutionResult result;
    result.stdout_text = run.out;
    result.stderr_text = run.err;
    if (run.timed_out) {
        result.status = ExecStatus::timeout;
        return result;
    }
    if (run.exit_code != 0) {
        result.status = ExecStatus::error;
        return result;
    }
    result.value = last_nonempty_line(run.out);
    result.status = result.value.empty() ? ExecStatus::error : ExecStatus::ok;
    return result;
}

}  // namespace alignkit
