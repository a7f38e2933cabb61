/* End-to-end checks for the cm_cardinal command-line tool.  Takes the path
 * to the built binary as argv[1], shells out to it, and checks output text,
 * JSON records, exit codes, table loading, and error handling.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#include "testutil.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifdef _WIN32
#error "this test driver assumes a POSIX shell"
#endif
#include <sys/wait.h>

namespace {

std::string g_bin;

struct RunResult {
    int exit_code;
    std::string out, err;
};

std::string slurp(const char* path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/* Run `prefix "binary" args` via the shell, capturing stdout/stderr. */
RunResult run(const std::string& args, const std::string& prefix = "") {
    std::string cmd = prefix + "\"" + g_bin + "\" " + args +
                      " > cli_stdout.tmp 2> cli_stderr.tmp";
    int rc = std::system(cmd.c_str());
    int code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    return {code, slurp("cli_stdout.tmp"), slurp("cli_stderr.tmp")};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

void test_build_text() {
    RunResult r = run("build --d 15 --p 109");
    const std::string expected =
        "D              15\n"
        "p              109\n"
        "U_signed       14\n"
        "V              4\n"
        "m              96\n"
        "method         T3\n"
        "j              72\n"
        "a4             57\n"
        "a6             38\n"
        "invariant_root 25\n";
    CHECKL(r.exit_code == 0 && r.out == expected,
           "build --d 15 --p 109 prints the full text certificate");
}

void test_build_json() {
    RunResult r = run("build --d 88 --p 103 --format json-lines");
    bool ok = r.exit_code == 0;
    if (ok) {
        auto obj = nlohmann::json::parse(r.out);
        ok = obj.size() == 10 && obj["D"] == "88" && obj["p"] == "103" &&
             obj["U_signed"] == "18" && obj["V"] == "1" && obj["m"] == "86" &&
             obj["method"] == "T11_RES" && obj["j"] == "66" &&
             obj["a4"] == "73" && obj["a6"] == "83" &&
             obj["invariant_root"] == "21";
    }
    CHECKL(ok, "build --format json-lines emits one parseable record");
    RunResult neg = run("build --d -88 --p 103 --format json-lines");
    CHECKL(neg.exit_code == 1 && neg.out.empty(),
           "rejected input produces no partial JSON");
}

void test_build_failures() {
    RunResult r2 = run("build --d 163 --p 41");
    CHECKL(r2.exit_code == 2 && r2.out.empty() &&
               contains(r2.err, "no certifiable candidate"),
           "missing table entry exits 2 with empty stdout");
    RunResult r2j = run("build --d 163 --p 41 --format json-lines");
    CHECKL(r2j.exit_code == 2 && r2j.out.empty(),
           "missing table entry exits 2 in JSON mode too");
    RunResult r3 = run("build --d 163 --p 7");
    CHECKL(r3.exit_code == 3 && r3.out.empty() &&
               contains(r3.err, "no representation"),
           "non-split prime exits 3");
}

void test_cornacchia() {
    RunResult r = run("cornacchia --d 15 --p 109");
    CHECKL(r.exit_code == 0 && r.out == "U 14\nV 4\n",
           "cornacchia prints the representation of 4p");
    RunResult none = run("cornacchia --d 163 --p 7");
    CHECKL(none.exit_code == 3 && none.out.empty(), "no representation exits 3");
}

void test_verify() {
    RunResult good = run("verify --d 15 --p 109 --u-signed +14");
    CHECKL(good.exit_code == 0 && contains(good.out, "order_check    pass"),
           "verify accepts the certified U_signed");
    RunResult bad = run("verify --d 15 --p 109 --u-signed -14");
    CHECKL(bad.exit_code == 1 && contains(bad.out, "order_check    FAIL"),
           "verify rejects the wrong sign");
}

void test_tables() {
    RunResult r = run("tables");
    bool ok = r.exit_code == 0 && contains(r.out, "20880;-780;1") &&
              contains(r.out, "ell=7") && contains(r.out, "-239-154*s;70-22*s;1");
    CHECKL(ok, "tables dumps the builtin class polynomials");
    {
        std::ofstream f("cli_roundtrip.tmp");
        f << r.out;
    }
    RunResult again = run("tables --table cli_roundtrip.tmp");
    CHECKL(again.exit_code == 0 && again.out == r.out,
           "reloading the dump reproduces it verbatim");
}

void test_custom_table() {
    {
        std::ofstream f("cli_d163.tmp");
        f << "# Hilbert class polynomial for discriminant -163\n"
          << "D=163 inv=gamma2 deg=1 coeffs=640320;1\n";
    }
    RunResult r = run("build --d 163 --p 41 --table cli_d163.tmp");
    bool ok = r.exit_code == 0 && contains(r.out, "method         BASELINE");
    CHECKL(ok, "--table supplies the class polynomial for D=163");
    RunResult env = run("build --d 163 --p 41",
                        "CM_CARDINAL_TABLE=cli_d163.tmp ");
    CHECKL(env.exit_code == 0 && env.out == r.out,
           "CM_CARDINAL_TABLE provides the same default");
    RunResult missing = run("build --d 163 --p 41 --table no_such_file.tmp");
    CHECKL(missing.exit_code == 1 && contains(missing.err, "cannot open"),
           "unreadable table file is a usage error");
}

void test_selfcheck() {
    RunResult r = run("selfcheck");
    CHECKL(r.exit_code == 0 && contains(r.out, "selfcheck passed (0 failures)"),
           "selfcheck passes on the builtin table");
    RunResult seeded1 = run("selfcheck --seed 1");
    RunResult seeded2 = run("selfcheck --seed 2");
    CHECKL(seeded1.exit_code == 0 && seeded1.out == seeded2.out,
           "selfcheck output is seed-independent");
    RunResult bad = run("selfcheck --corrupt-builtin");
    CHECKL(bad.exit_code == 1 && contains(bad.out, "selfcheck FAILED"),
           "a perturbed builtin coefficient is detected");
}

void test_usage_errors() {
    bool ok = run("build --d 15").exit_code == 1 &&                  // missing --p
              run("build --d 14 --p 109").exit_code == 1 &&          // D = 2 mod 4
              run("build --d 15 --p 111").exit_code == 1 &&          // composite p
              run("build --d 15 --p 109 --format yaml").exit_code == 1 &&
              run("build --d xyz --p 109").exit_code == 1 &&
              run("build --d 15 --p 109 --bogus").exit_code == 1 &&
              run("").exit_code == 1;                                // no subcommand
    CHECKL(ok, "malformed invocations exit 1");
    CHECKL(run("--help").exit_code == 0, "--help exits 0");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cm_cardinal>\n");
        return 1;
    }
    g_bin = argv[1];
    test_build_text();
    test_build_json();
    test_build_failures();
    test_cornacchia();
    test_verify();
    test_tables();
    test_custom_table();
    test_selfcheck();
    test_usage_errors();
    for (const char* f : {"cli_stdout.tmp", "cli_stderr.tmp",
                          "cli_roundtrip.tmp", "cli_d163.tmp"})
        std::remove(f);
    return testutil::done("test_cli");
}
