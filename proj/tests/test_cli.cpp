// Drives the installed CLI binary end to end: exit codes, byte-identical
// reruns, config-file overrides. The binary path arrives as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run_cmd(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-lpplab>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const std::string quiet = " > cli_stdout.tmp 2> cli_stderr.tmp";

    expect(run_cmd(bin + quiet) == 1, "no arguments exits 1");
    expect(run_cmd(bin + " --help" + quiet) == 0, "--help exits 0");
    expect(run_cmd(bin + " frobnicate" + quiet) == 1, "unknown subcommand exits 1");
    expect(run_cmd(bin + " simulate --bogus-flag 3" + quiet) == 1, "unknown flag exits 1");
    expect(run_cmd(bin + " simulate --n 40 --reps 10 --format xml" + quiet) == 1,
           "bad format exits 1");
    expect(run_cmd(bin + " simulate --n 40 --reps 10 --rho 1.5 --out cli_a.tmp" + quiet) == 0,
           "bad density becomes an error row, run still succeeds");
    expect(slurp("cli_a.tmp").find("Density") != std::string::npos, "error row names the field");

    const std::string sim = " simulate --n 60 --reps 30 --seed 9 --jobs 2";
    expect(run_cmd(bin + sim + " --out cli_b1.tmp" + quiet) == 0, "simulate run 1");
    expect(run_cmd(bin + sim + " --out cli_b2.tmp" + quiet) == 0, "simulate run 2");
    const std::string b1 = slurp("cli_b1.tmp");
    expect(!b1.empty() && b1 == slurp("cli_b2.tmp"), "identical invocations give identical bytes");

    expect(run_cmd(bin + " simulate --n 60 --reps 30 --seed 10 --jobs 2 --out cli_b3.tmp" + quiet) ==
               0,
           "different seed runs");
    expect(b1 != slurp("cli_b3.tmp"), "different seed changes the output");

    // seed from the environment
    expect(run_cmd("LPP_LAB_SEED=9 " + bin + " simulate --n 60 --reps 30 --jobs 2 --out cli_b4.tmp" +
                   quiet) == 0,
           "env seed run");
    expect(slurp("cli_b4.tmp") == b1, "LPP_LAB_SEED matches --seed");

    // config file with a flag override
    {
        std::ofstream cfg("cli_cfg.tmp");
        cfg << "n = 60\nreps = 30\nseed = 1\n";
    }
    expect(run_cmd(bin + " simulate --config cli_cfg.tmp --seed 9 --jobs 2 --out cli_b5.tmp" +
                   quiet) == 0,
           "config file run");
    expect(slurp("cli_b5.tmp") == b1, "flags override config-file values");

    // json emission
    expect(run_cmd(bin + sim + " --format json --out cli_b6.tmp" + quiet) == 0, "json run");
    expect(slurp("cli_b6.tmp").find("\"columns\"") != std::string::npos, "json has columns");

    // queue-check end to end (small window keeps it fast)
    expect(run_cmd(bin + " queue-check --lambda 0.4 --rho 0.6 --n 20000 --seed 1 --out cli_q.tmp" +
                   quiet) == 0,
           "queue-check runs");
    {
        const std::string q = slurp("cli_q.tmp");
        expect(q.find("burke_departure_ks") != std::string::npos, "queue-check emits KS rows");
        expect(q.find("fail") == std::string::npos, "queue-check all pass");
    }

    for (const char* f : {"cli_a.tmp", "cli_b1.tmp", "cli_b2.tmp", "cli_b3.tmp", "cli_b4.tmp",
                          "cli_b5.tmp", "cli_b6.tmp", "cli_q.tmp", "cli_cfg.tmp", "cli_stdout.tmp",
                          "cli_stderr.tmp"})
        std::remove(f);

    if (failures) {
        std::cerr << failures << " CLI checks failed\n";
        return 1;
    }
    std::puts("all CLI checks passed");
    return 0;
}
