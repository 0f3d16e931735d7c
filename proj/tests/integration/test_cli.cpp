// Runs the bj executable end to end and checks exit codes and outputs.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("bj_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + BJ_CLI_PATH + "\" " + args + " >" +
                            (work_dir() / "stdout.txt").string() + " 2>" +
                            (work_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path dataset() {
    const fs::path p = work_dir() / "arrivals.csv";
    if (!fs::exists(p)) {
        REQUIRE(run("simulate --order 1,1,1 --seasonal 1,0,1 --ar 0.3 --ma -0.6 --sar 0.8 "
                    "--sma -0.4 --sigma2 0.002 --n 96 --seed 10 --start 2012-01 --exp-level 12.5 "
                    "--output " + p.string()) == 0);
    }
    return p;
}

std::string tree(const fs::path& dir) {
    std::string out;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out += fs::relative(f, dir).string() + "\n" + slurp(f);
    return out;
}

const char* kSmallGrid = " --max-p 1 --max-q 1 --max-P 1 --max-Q 1 --threads 2";

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run("") == 1);
    CHECK(run("nonsense") == 1);
    CHECK(run("fit") == 1);
    CHECK(run("fit --input " + dataset().string()) == 1);
    CHECK(run("fit --input " + dataset().string() + " --order 1,1") == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("data errors exit with 2") {
    CHECK(run("ingest --input " + (work_dir() / "missing.csv").string()) == 2);
    const fs::path bad = work_dir() / "bad.csv";
    std::ofstream(bad) << "month,arrivals\n2012-01,5\n2012-03,6\n";
    CHECK(run("ingest --input " + bad.string()) == 2);
    CHECK(slurp(work_dir() / "stderr.txt").find("2012-02") != std::string::npos);
    CHECK(run("fit --input " + dataset().string() + " --order 0,1,1 --split 2031-01") == 2);
}

TEST_CASE("ingest normalises and roundtrips the file") {
    const fs::path copy = work_dir() / "copy.csv";
    REQUIRE(run("ingest --input " + dataset().string() + " --output " + copy.string()) == 0);
    CHECK(slurp(copy) == slurp(dataset()));
    CHECK(slurp(work_dir() / "stdout.txt").find("96") != std::string::npos);
}

TEST_CASE("a split outside the data leaves no partial output") {
    const fs::path out = work_dir() / "bad_split";
    CHECK(run("pipeline --input " + dataset().string() + " --split 2031-01 --output " + out.string() +
              kSmallGrid) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("single-model commands") {
    const std::string in = " --input " + dataset().string() + " --order 0,1,1 --seasonal 0,1,1";
    CHECK(run("fit" + in) == 0);
    CHECK(slurp(work_dir() / "stdout.txt").find("\"converged\": true") != std::string::npos);
    CHECK(run("diagnose" + in) == 0);
    CHECK(run("forecast" + in + " --horizon 6") == 0);
    const fs::path out = work_dir() / "earn";
    CHECK(run("earnings" + in + " --loss-from 2020-04 --loss-to 2020-07 --output " + out.string()) == 0);
    CHECK(fs::exists(out / "earnings" / "monthly_loss.csv"));
    CHECK(run("identify --input " + dataset().string()) == 0);
}

TEST_CASE("pipeline output is deterministic") {
    const fs::path a = work_dir() / "run_a", b = work_dir() / "run_b";
    REQUIRE(run("pipeline --input " + dataset().string() + " --output " + a.string() + kSmallGrid) == 0);
    REQUIRE(run("pipeline --input " + dataset().string() + " --output " + b.string() + kSmallGrid) == 0);
    const std::string ta = tree(a);
    CHECK(ta.find("selection/candidates.csv") != std::string::npos);
    CHECK(ta == tree(b));
    fs::remove_all(work_dir());
}
