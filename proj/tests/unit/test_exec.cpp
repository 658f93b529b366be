#include <doctest.h>

#include <chrono>

#include "alignkit/exec.hpp"
#include "alignkit/extract.hpp"

using namespace alignkit;

namespace {

CodeBlock block_of(const std::string& source) {
    CodeBlock b;
    b.source = source;
    b.end = source.size();
    return b;
}

}  // namespace

TEST_SUITE("exec") {

TEST_CASE("prints the variable assigned on the last line") {
    ExecutorConfig cfg;
    ExecutionResult r = run_program(block_of("a = 27/3\nb = a * 2/3"), cfg);
    REQUIRE(r.status == ExecStatus::ok);
    // The interpreter prints 6.0; the comparator sees it as 6.
    CHECK(r.value == "6.0");
    CHECK(numbers_equal(r.value, "6"));
}

TEST_CASE("augmented assignment and self-printing blocks") {
    ExecutorConfig cfg;
    SUBCASE("augmented") {
        ExecutionResult r = run_program(block_of("x = 5\nx += 2"), cfg);
        REQUIRE(r.status == ExecStatus::ok);
        CHECK(r.value == "7");
    }
    SUBCASE("block prints for itself") {
        ExecutionResult r = run_program(block_of("print(3 * 7)"), cfg);
        REQUIRE(r.status == ExecStatus::ok);
        CHECK(r.value == "21");
    }
    SUBCASE("no assignment and no output is an error") {
        ExecutionResult r = run_program(block_of("y = [1]\ny.append(2)"), cfg);
        CHECK(r.status == ExecStatus::error);
    }
}

TEST_CASE("runtime failure reports status=error with stderr") {
    ExecutorConfig cfg;
    ExecutionResult r = run_program(block_of("z = 1 / 0"), cfg);
    CHECK(r.status == ExecStatus::error);
    CHECK(r.stderr_text.find("ZeroDivisionError") != std::string::npos);
}

TEST_CASE("timeout: infinite loop killed within the budget") {
    ExecutorConfig cfg;
    cfg.timeout_secs = 2.0;
    auto start = std::chrono::steady_clock::now();
    ExecutionResult r = run_program(block_of("while True: pass"), cfg);
    auto elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    CHECK(r.status == ExecStatus::timeout);
    CHECK(elapsed < 3.0);
}

TEST_CASE("output is truncated at max_output_bytes") {
    ExecutorConfig cfg;
    cfg.max_output_bytes = 1024;
    ExecutionResult r =
        run_program(block_of("print('x' * 100000)\nans = 5"), cfg);
    CHECK(r.stdout_text.size() <= 1024);
}

}  // TEST_SUITE
