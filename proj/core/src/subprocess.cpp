#include "alignkit/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

[[noreturn]] void exec_child(const std::vector<std::string>& argv, int in_fd,
                             int out_fd, int err_fd,
                             const std::optional<std::filesystem::path>& cwd) {
    if (cwd) {
        if (chdir(cwd->c_str()) != 0) _exit(127);
    }
    dup2(in_fd, STDIN_FILENO);
    dup2(out_fd, STDOUT_FILENO);
    if (err_fd >= 0) dup2(err_fd, STDERR_FILENO);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
}

void set_nonblocking(int fd) {
    int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& stdin_data, double timeout_secs,
                          size_t max_output_bytes,
                          const std::optional<std::filesystem::path>& cwd) {
    if (argv.empty()) throw Error("run_command: empty argv");

    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw Error("run_command: pipe() failed");
    }

    pid_t pid = fork();
    if (pid < 0) throw Error("run_command: fork() failed");
    if (pid == 0) {
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(err_pipe[0]);
        exec_child(argv, in_pipe[0], out_pipe[1], err_pipe[1], cwd);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);

    set_nonblocking(in_pipe[1]);
    set_nonblocking(out_pipe[0]);
    set_nonblocking(err_pipe[0]);

    CommandResult result;
    size_t written = 0;
    bool stdin_open = true;
    if (stdin_data.empty()) {
        close(in_pipe[1]);
        stdin_open = false;
    }

    auto start = Clock::now();
    bool out_open = true, err_open = true;
    char buf[4096];

    while (out_open || err_open || stdin_open) {
        if (timeout_secs > 0 && seconds_since(start) > timeout_secs) {
            kill(pid, SIGKILL);
            result.timed_out = true;
            break;
        }
        struct pollfd fds[3];
        int n = 0;
        int out_idx = -1, err_idx = -1, in_idx = -1;
        if (out_open) {
            out_idx = n;
            fds[n++] = {out_pipe[0], POLLIN, 0};
        }
        if (err_open) {
            err_idx = n;
            fds[n++] = {err_pipe[0], POLLIN, 0};
        }
        if (stdin_open) {
            in_idx = n;
            fds[n++] = {in_pipe[1], POLLOUT, 0};
        }
        int rv = poll(fds, n, 50);
        if (rv < 0 && errno != EINTR) break;
        if (rv <= 0) continue;

        if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP))) {
            ssize_t got = read(out_pipe[0], buf, sizeof(buf));
            if (got > 0) {
                if (result.out.size() < max_output_bytes) {
                    result.out.append(buf, std::min<size_t>(
                                               got, max_output_bytes - result.out.size()));
                }
            } else if (got == 0 || (got < 0 && errno != EAGAIN)) {
                close(out_pipe[0]);
                out_open = false;
            }
        }
        if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP))) {
            ssize_t got = read(err_pipe[0], buf, sizeof(buf));
            if (got > 0) {
                if (result.err.size() < max_output_bytes) {
                    result.err.append(buf, std::min<size_t>(
                                               got, max_output_bytes - result.err.size()));
                }
            } else if (got == 0 || (got < 0 && errno != EAGAIN)) {
                close(err_pipe[0]);
                err_open = false;
            }
        }
        if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[in_idx].revents & (POLLERR | POLLHUP)) {
                close(in_pipe[1]);
                stdin_open = false;
            } else {
                ssize_t put = write(in_pipe[1], stdin_data.data() + written,
                                    stdin_data.size() - written);
                if (put > 0) written += static_cast<size_t>(put);
                if (written >= stdin_data.size() || (put < 0 && errno != EAGAIN)) {
                    close(in_pipe[1]);
                    stdin_open = false;
                }
            }
        }
    }

    if (stdin_open) close(in_pipe[1]);
    if (out_open) close(out_pipe[0]);
    if (err_open) close(err_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (result.timed_out) {
        result.exit_code = -1;
    } else if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

PipeProcess::PipeProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw Error("PipeProcess: empty argv");
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw Error("PipeProcess: pipe() failed");
    }
    pid_t pid = fork();
    if (pid < 0) throw Error("PipeProcess: fork() failed");
    if (pid == 0) {
        close(in_pipe[1]);
        close(out_pipe[0]);
        exec_child(argv, in_pipe[0], out_pipe[1], -1, std::nullopt);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    in_fd_ = in_pipe[1];
    out_fd_ = out_pipe[0];
    pid_ = pid;
    set_nonblocking(out_fd_);
}

PipeProcess::~PipeProcess() {
    if (in_fd_ >= 0) close(in_fd_);
    if (out_fd_ >= 0) close(out_fd_);
    if (pid_ > 0) {
        kill(static_cast<pid_t>(pid_), SIGKILL);
        int status = 0;
        waitpid(static_cast<pid_t>(pid_), &status, 0);
    }
}

void PipeProcess::write_line(const std::string& line) {
    std::string data = line;
    data += '\n';
    size_t written = 0;
    while (written < data.size()) {
        ssize_t put = write(in_fd_, data.data() + written, data.size() - written);
        if (put < 0) {
            if (errno == EINTR) continue;
            throw Error("backend process is not accepting input");
        }
        written += static_cast<size_t>(put);
    }
}

std::string PipeProcess::read_line(double timeout_secs) {
    auto start = Clock::now();
    for (;;) {
        size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (timeout_secs > 0 && seconds_since(start) > timeout_secs) {
            throw Error("backend process timed out");
        }
        struct pollfd fd = {out_fd_, POLLIN, 0};
        int rv = poll(&fd, 1, 50);
        if (rv < 0 && errno != EINTR) throw Error("backend process poll failed");
        if (rv <= 0) continue;
        char buf[4096];
        ssize_t got = read(out_fd_, buf, sizeof(buf));
        if (got > 0) {
            buffer_.append(buf, static_cast<size_t>(got));
        } else if (got == 0) {
            throw Error("backend process closed its output");
        } else if (errno != EAGAIN && errno != EINTR) {
            throw Error("backend process read failed");
        }
    }
}

bool PipeProcess::alive() const {
    if (pid_ <= 0) return false;
    return kill(static_cast<pid_t>(pid_), 0) == 0;
}

TempDir::TempDir(const std::string& prefix) {
    auto base = std::filesystem::temp_directory_path();
    std::string tmpl = (base / (prefix + "XXXXXX")).string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) {
        throw Error("cannot create temp dir under " + base.string());
    }
    path_ = buf.data();
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace alignkit
