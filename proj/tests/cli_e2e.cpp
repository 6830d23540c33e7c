// End-to-end CLI corpus: every document kind, at least one failure of each
// kind, the documented exit codes, and byte-identical reruns.

#include <array>
#include <cstdio>
#include <iostream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& command) {
    RunResult res;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

int failures = 0;

void expect_exit(const std::string& cmd, int want) {
    const auto res = run(cmd);
    if (res.exit_code != want) {
        ++failures;
        std::cerr << "FAIL: " << cmd << " exited " << res.exit_code << ", expected "
                  << want << "\n";
    } else {
        std::cout << "ok: exit " << want << "  " << cmd << "\n";
    }
}

void expect_contains(const std::string& cmd, const std::string& needle) {
    const auto res = run(cmd);
    if (res.output.find(needle) == std::string::npos) {
        ++failures;
        std::cerr << "FAIL: output of " << cmd << " does not contain '" << needle
                  << "'\n";
    } else {
        std::cout << "ok: contains '" << needle << "'  " << cmd << "\n";
    }
}

void expect_stable(const std::string& cmd) {
    const auto a = run(cmd);
    const auto b = run(cmd);
    if (a.output != b.output || a.exit_code != b.exit_code) {
        ++failures;
        std::cerr << "FAIL: " << cmd << " is not byte-stable\n";
    } else {
        std::cout << "ok: byte-stable  " << cmd << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_e2e <ncg-forge binary> <fixtures dir>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const std::string fix = argv[2];

    // exit-code contract across the corpus
    expect_exit(bin + " validate " + fix + "/triple_two_point_even.json", 0);
    expect_exit(bin + " validate " + fix + "/triple_m2_real_odd.json", 0);
    expect_exit(bin + " validate " + fix + "/triple_ko_mislabeled.json", 1);
    expect_exit(bin + " validate " + fix + "/triple_nonhermitian.json", 1);
    expect_exit(bin + " validate " + fix + "/malformed.json", 2);
    expect_exit(bin + " validate " + fix + "/does_not_exist.json", 2);
    expect_exit(bin + " validate " + fix + "/category_one_object_c3.json", 0);
    expect_exit(bin + " validate " + fix + "/category_two_objects.json", 0);
    expect_exit(bin + " validate " + fix + "/category_nonfull.json", 1);
    expect_exit(bin + " validate " + fix + "/spaceoid_trivial_2x2.json", 0);
    expect_exit(bin + " validate " + fix + "/spaceoid_twisted.json", 0);
    expect_exit(bin + " validate " + fix + "/spaceoid_broken.json", 1);
    expect_exit(bin + " validate " + fix + "/bimodule_line.json", 0);
    expect_exit(bin + " morphism " + fix + "/morphism_identity.json", 0);
    expect_exit(bin + " morphism " + fix + "/morphism_scalar_shift.json", 1);
    expect_exit(bin + " morphism " + fix + "/morphism_doubled_d.json", 1);
    expect_exit(bin + " distance --oracle " + fix + "/triple_two_point_even.json", 0);
    expect_exit(bin + " dualize --roundtrip " + fix + "/category_two_objects.json", 0);
    expect_exit(bin + " dualize --roundtrip " + fix + "/spaceoid_twisted.json", 0);
    expect_exit(bin + " report --seed 11 --count 3", 0);
    // the NCG_FORGE_TOL environment variable feeds the global tolerance
    expect_exit("NCG_FORGE_TOL=10 " + bin + " validate " + fix +
                    "/triple_ko_mislabeled.json",
                0);

    // content checks
    expect_contains(bin + " validate " + fix + "/triple_ko_mislabeled.json",
                    "J-squared");
    expect_contains(bin + " validate " + fix + "/triple_ko_mislabeled.json",
                    "required -");
    expect_contains(bin + " morphism " + fix + "/morphism_scalar_shift.json",
                    "[pass] riemannian");
    expect_contains(bin + " morphism " + fix + "/morphism_scalar_shift.json",
                    "[fail] tgs");
    expect_contains(bin + " morphism " + fix + "/morphism_doubled_d.json", "d_target");
    expect_contains(bin + " --format json distance " + fix +
                        "/triple_disconnected.json",
                    "\"inf\"");
    expect_contains(bin + " distance --states 0 " + fix +
                        "/triple_two_point_even.json",
                    "d(0,0) = 0");
    expect_contains(bin + " dualize --roundtrip " + fix + "/spaceoid_twisted.json",
                    "isomorphic: true");
    expect_contains(bin + " validate " + fix + "/spaceoid_broken.json", "p=1");

    // emitted duals reload and validate as documents of the dual kind
    expect_exit(bin + " dualize " + fix + "/category_one_object_c3.json > /tmp/ncg_dual_spaceoid.json && " +
                    bin + " validate /tmp/ncg_dual_spaceoid.json",
                0);
    expect_exit(bin + " dualize " + fix + "/spaceoid_twisted.json > /tmp/ncg_dual_category.json && " +
                    bin + " validate /tmp/ncg_dual_category.json",
                0);

    // determinism: identical invocations produce identical bytes
    expect_stable(bin + " --format json validate " + fix +
                  "/triple_two_point_even.json");
    expect_stable(bin + " --format json distance --oracle " + fix +
                  "/triple_two_point_even.json");
    expect_stable(bin + " --format json dualize " + fix +
                  "/category_one_object_c3.json");
    expect_stable(bin + " --format json report --seed 5 --count 3");

    if (failures > 0) {
        std::cerr << failures << " CLI checks failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}
