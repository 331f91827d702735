// SPDX-License-Identifier: Apache-2.0
#include "codegraph/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "codegraph/errors.hpp"

namespace codegraph {

CommandResult run_command(const std::string& command, const std::string& cwd,
                          int timeout_seconds) {
    int fds[2];
    if (pipe(fds) != 0) {
        throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
    }

    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw TransportError(std::string("fork failed: ") + std::strerror(errno));
    }

    if (pid == 0) {
        setpgid(0, 0);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    close(fds[1]);
    fcntl(fds[0], F_SETFL, O_NONBLOCK);

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::seconds(timeout_seconds);
    // After a kill, bounded patience for the pipe to drain and close.
    const auto grace = std::chrono::seconds(5);
    auto hard_stop = deadline + grace;

    CommandResult result;
    bool exited = false;
    bool eof = false;
    int status = 0;

    while (!(exited && eof)) {
        if (!eof) {
            struct pollfd pfd{fds[0], POLLIN, 0};
            poll(&pfd, 1, 100);
            char buf[4096];
            while (true) {
                ssize_t r = read(fds[0], buf, sizeof buf);
                if (r > 0) {
                    result.output.append(buf, static_cast<std::size_t>(r));
                } else if (r == 0) {
                    eof = true;
                    break;
                } else {
                    break; // EAGAIN or a transient error; poll again
                }
            }
        } else {
            usleep(20 * 1000);
        }

        if (!exited && waitpid(pid, &status, WNOHANG) == pid) exited = true;

        auto now = clock::now();
        if (!result.timed_out && now >= deadline && !(exited && eof)) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            hard_stop = now + grace;
        }
        if (result.timed_out && now >= hard_stop) break; // a stray holder kept the pipe open
    }

    close(fds[0]);
    if (!exited && waitpid(pid, &status, WNOHANG) != pid) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        exited = true;
    }

    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

} // namespace codegraph
