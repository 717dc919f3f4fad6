#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>

namespace {

const char* kCli = MPARITY_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Run the installed binary through the shell, capturing stdout/stderr.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string out_path = "cli_stdout_" + std::to_string(counter) + ".tmp";
    const std::string err_path = "cli_stderr_" + std::to_string(counter) + ".tmp";
    ++counter;

    const std::string cmd = env_prefix + "\"" + std::string(kCli) + "\" " + args +
                            " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult result;
    REQUIRE(raw != -1);
    if (WIFEXITED(raw)) {
        result.exit_code = WEXITSTATUS(raw);
    }
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return result;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const std::string kCoupling =
    "--set mirror.omega_rad_s=628318.5307179586 --set photon.eta=0.5 ";

}  // namespace

TEST_CASE("simulate prints one summary row and exits cleanly") {
    const auto r = run_cli("simulate " + kCoupling);
    CHECK(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("temperature_K,eta,", 0) == 0);
    // Unitary model at T = 0: parity is exactly +1, printed as "1".
    std::istringstream row(lines[1]);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 12);
    CHECK(cells[0] == "0");
    CHECK(cells[1] == "0.5");
    CHECK(cells[4] == "1");
    CHECK(cells[11] == "-1");
}

TEST_CASE("simulate emits json documents on request") {
    const auto r = run_cli("simulate --format json-doc " + kCoupling);
    CHECK(r.exit_code == 0);
    REQUIRE(!r.out.empty());
    CHECK(r.out.front() == '{');
    CHECK(r.out.find("\"summary\"") != std::string::npos);
    CHECK(r.out.find("\"parity_expectation\": 1.0") != std::string::npos);
}

TEST_CASE("config precedence: file < environment < --set") {
    const std::string cfg_path = "cli_precedence.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "mirror.omega_rad_s = 628318.5307179586\n"
            << "photon.eta = 0.5\n";
    }

    const auto file_only = run_cli("simulate --config " + cfg_path);
    CHECK(file_only.exit_code == 0);
    CHECK(split_lines(file_only.out)[1].find(",0.5,") != std::string::npos);

    const auto env_wins = run_cli("simulate --config " + cfg_path,
                                  "MPARITY_PHOTON_ETA=0.25 ");
    CHECK(env_wins.exit_code == 0);
    CHECK(split_lines(env_wins.out)[1].find(",0.25,") != std::string::npos);

    const auto set_wins = run_cli("simulate --config " + cfg_path +
                                      " --set photon.eta=0.75",
                                  "MPARITY_PHOTON_ETA=0.25 ");
    CHECK(set_wins.exit_code == 0);
    CHECK(split_lines(set_wins.out)[1].find(",0.75,") != std::string::npos);

    std::remove(cfg_path.c_str());
}

TEST_CASE("configuration errors exit with code 2") {
    // No coupling parameters at all.
    CHECK(run_cli("simulate").exit_code == 2);
    // Over-determined coupling.
    CHECK(run_cli("simulate " + kCoupling + "--set photon.lambda_m=1e-10").exit_code ==
          2);
    // Unknown key and malformed --set.
    CHECK(run_cli("simulate " + kCoupling + "--set no.such.key=1").exit_code == 2);
    CHECK(run_cli("simulate " + kCoupling + "--set photon.eta").exit_code == 2);
    // Sampling without a seed.
    CHECK(run_cli("clicks " + kCoupling).exit_code == 2);
    // Unknown sweep axis and bad grid numbers.
    CHECK(run_cli("sweep --axis lambda --grid 1,2 " + kCoupling).exit_code == 2);
    CHECK(run_cli("sweep --axis temperature --grid 1,x " + kCoupling).exit_code == 2);
    // Unknown subcommand is a usage error (CLI library exit code, nonzero).
    CHECK(run_cli("frobnicate").exit_code != 0);
    const auto err = run_cli("simulate");
    CHECK(err.err.find("error:") != std::string::npos);
}

TEST_CASE("unconverged step refinement exits with code 4") {
    const auto r = run_cli(
        "simulate " + kCoupling +
        "--set decoherence.variant=localization "
        "--set decoherence.lambda_loc=1e57 "
        "--set decoherence.duration_s=1e-5 "
        "--set decoherence.step_tol=1e-30");
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("clicks reruns are byte-identical for a fixed seed") {
    const std::string args = "clicks " + kCoupling +
                             "--set mirror.temperature_K=4.8e-6 "
                             "--set run.n_events=2000 --seed 31415";
    const auto a = run_cli(args + " --threads 1");
    const auto b = run_cli(args + " --threads 4");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    REQUIRE(!a.out.empty());
    CHECK(a.out == b.out);
    CHECK(split_lines(a.out).size() == 2001);  // header + one line per event
    CHECK(split_lines(a.out)[0] == "trajectory_id,detector,shift_j,accepted");
    // The human digest goes to stderr, not into the data stream.
    CHECK(a.err.find("events 2000") != std::string::npos);
    CHECK(a.out.find("events 2000") == std::string::npos);

    const auto c = run_cli(args + " --format json-doc");
    CHECK(c.exit_code == 0);
    CHECK(c.out.front() == '{');
    CHECK(c.out.find("\"records\"") != std::string::npos);
}

TEST_CASE("sweep emits one row per grid value") {
    const auto r = run_cli("sweep --axis temperature --grid 0,2.4e-6,4.8e-6 " +
                           kCoupling);
    CHECK(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("axis,axis_value,temperature_K,", 0) == 0);
    CHECK(lines[1].rfind("temperature,0,", 0) == 0);
    CHECK(lines[3].rfind("temperature,4.7999999999999998e-06,", 0) == 0);
}

TEST_CASE("feasibility curve with solved targets") {
    const auto r = run_cli(
        "feasibility --lambda 1e-10 --eta 0.5 --points 5 --target-ratio 1e-13");
    CHECK(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 7);  // header + 5 grid points + 1 solved row
    CHECK(lines[0] == "n_nucleons,lambda_m,eta,omega_rad_s,resolution_ratio");
    CHECK(lines[1].rfind("1000000,", 0) == 0);
    CHECK(lines[6].rfind("1057127883.6637449,", 0) == 0);

    CHECK(run_cli("feasibility --lambda 1e-10 --eta 0.5 --geometry 3").exit_code == 2);
    CHECK(run_cli("feasibility --eta 0.5").exit_code != 0);  // --lambda required

    const auto j = run_cli(
        "feasibility --lambda 1e-10 --eta 0.5 --points 3 --format json-doc");
    CHECK(j.exit_code == 0);
    CHECK(j.out.find("\"points\"") != std::string::npos);
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "cli_outfile.tmp";
    const auto r = run_cli("simulate --out " + path + " " + kCoupling);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const std::string written = slurp(path);
    CHECK(written.rfind("temperature_K,", 0) == 0);
    CHECK(split_lines(written).size() == 2);
    std::remove(path.c_str());
}
