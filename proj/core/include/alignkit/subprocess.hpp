#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace alignkit {

struct CommandResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

// Runs argv as a child process, feeding stdin_data and capturing stdout and
// stderr (each truncated at max_output_bytes). Kills the child when the wall
// clock exceeds timeout_secs; timeout_secs <= 0 means no limit.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& stdin_data, double timeout_secs,
                          size_t max_output_bytes,
                          const std::optional<std::filesystem::path>& cwd = {});

// A long-lived child spoken to over stdin/stdout, one line per message.
// Used for line-delimited JSON backends.
class PipeProcess {
  public:
    explicit PipeProcess(const std::vector<std::string>& argv);
    ~PipeProcess();

    PipeProcess(const PipeProcess&) = delete;
    PipeProcess& operator=(const PipeProcess&) = delete;

    // Both throw Error on a dead or unresponsive child.
    void write_line(const std::string& line);
    std::string read_line(double timeout_secs);

    bool alive() const;

  private:
    int in_fd_ = -1;   // child's stdin (we write)
    int out_fd_ = -1;  // child's stdout (we read)
    long pid_ = -1;
    std::string buffer_;
};

// RAII temp directory under the system temp root.
class TempDir {
  public:
    explicit TempDir(const std::string& prefix);
    ~TempDir();

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace alignkit
