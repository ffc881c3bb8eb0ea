#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    if (const char* env = std::getenv("PONDWATCH_CLI")) return env;
    return PONDWATCH_CLI_PATH;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string command = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pondwatch-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::size_t count_data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::size_t rows = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (!line.empty()) ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("simulate").exit_code == 2);  // missing --pond/--profile
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
    CHECK(run_cli("verdict").exit_code == 2);
    const RunResult unknown_algo = run_cli("evaluate --synthetic 50 --algo nope");
    CHECK(unknown_algo.exit_code == 2);
    CHECK(unknown_algo.output.find("knn") != std::string::npos);  // lists valid tags
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("simulate: post-warmup row count and byte determinism") {
    TempDir dir;
    const fs::path a = dir.path / "a.csv";
    const fs::path b = dir.path / "b.csv";
    const std::string flags = "simulate --pond 1 --duration 3000 --interval 150 --seed 42";
    CHECK(run_cli(flags + " --out " + a.string()).exit_code == 0);
    CHECK(run_cli(flags + " --out " + b.string()).exit_code == 0);

    const std::string csv = slurp(a);
    CHECK(count_data_rows(csv) == 20);
    CHECK(csv == slurp(b));  // byte identical

    const fs::path c = dir.path / "c.csv";
    CHECK(run_cli("simulate --pond 1 --duration 3000 --interval 150 --seed 43 --out " +
                  c.string())
              .exit_code == 0);
    CHECK(csv != slurp(c));

    // Zero warmup keeps every tick.
    const fs::path d = dir.path / "d.csv";
    CHECK(run_cli("simulate --pond 2 --duration 600 --interval 60 --warmup 0 --seed 1 --out " +
                  d.string())
              .exit_code == 0);
    CHECK(count_data_rows(slurp(d)) == 10);
}

TEST_CASE("verdict --fixtures reproduces the pond table") {
    const RunResult text = run_cli("verdict --fixtures");
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("Pond 1") != std::string::npos);
    CHECK(text.output.find("6.02-8.39") != std::string::npos);

    const RunResult json_run = run_cli("verdict --fixtures --format json");
    CHECK(json_run.exit_code == 0);
    const auto doc = nlohmann::json::parse(json_run.output);
    REQUIRE(doc.size() == 5);
    const bool expected[5] = {true, false, true, true, false};
    for (int i = 0; i < 5; ++i) {
        CHECK(doc[i].at("pond_id") == i + 1);
        CHECK(doc[i].at("recommended") == expected[i]);
    }
    CHECK(doc[1].at("remarks").get<std::string>().find("above ideal") != std::string::npos);
    CHECK(doc[4].at("remarks").get<std::string>().find("below ideal") != std::string::npos);
}

TEST_CASE("verdict --input judges a simulated pond-5 feed") {
    TempDir dir;
    const fs::path feed = dir.path / "p5.csv";
    REQUIRE(run_cli("simulate --pond 5 --duration 3000 --interval 150 --seed 7 --out " +
                    feed.string())
                .exit_code == 0);
    const RunResult result =
        run_cli("verdict --input " + feed.string() + " --pond 5 --format json");
    CHECK(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    REQUIRE(doc.size() == 1);
    CHECK(doc[0].at("recommended") == false);
    CHECK(doc[0].at("remarks").get<std::string>().find("ph") != std::string::npos);

    const RunResult empty = run_cli("verdict --input /nonexistent.csv");
    CHECK(empty.exit_code == 1);
}

TEST_CASE("evaluate writes reports, models and a ranking; reruns are identical") {
    TempDir dir;
    const fs::path out1 = dir.path / "r1";
    const fs::path out2 = dir.path / "r2";
    const std::string flags =
        "evaluate --synthetic 120 --seed 3 --algo knn,j48 --folds 4 --rf-trees 10";
    CHECK(run_cli(flags + " --out " + out1.string() + " --save-models " + out1.string())
              .exit_code == 0);
    CHECK(run_cli(flags + " --out " + out2.string() + " --save-models " + out2.string())
              .exit_code == 0);

    for (const char* name :
         {"knn.report.json", "j48.report.json", "knn.report.txt", "ranking.txt",
          "knn.model.json", "j48.model.json"}) {
        CHECK(fs::exists(out1 / name));
        CHECK(slurp(out1 / name) == slurp(out2 / name));  // byte identical
    }
    const auto report = nlohmann::json::parse(slurp(out1 / "knn.report.json"));
    CHECK(report.at("algorithm") == "knn");
    CHECK(report.at("accuracy").get<double>() >= 0.0);

    const std::string ranking = slurp(out1 / "ranking.txt");
    CHECK(ranking.find("Accuracy (%)") != std::string::npos);
    CHECK(ranking.find("Position") != std::string::npos);
}

TEST_CASE("evaluate reads a dataset CSV") {
    TempDir dir;
    const fs::path data = dir.path / "data.csv";
    {
        std::ofstream out(data);
        out << "ph,temperature,turbidity,conductivity,depth,species\n";
        for (int i = 0; i < 30; ++i) {
            out << 6.5 + 0.01 * i << ",20,3,1000,1.5,rui\n";
            out << 8.2 + 0.01 * i << ",22,4,1400,2.5,koi\n";
        }
    }
    const RunResult result =
        run_cli("evaluate --dataset " + data.string() + " --algo knn --folds 5");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("knn") != std::string::npos);
}

TEST_CASE("export-report re-renders a saved report and dumps fixtures") {
    TempDir dir;
    const fs::path out = dir.path / "reports";
    REQUIRE(run_cli("evaluate --synthetic 60 --seed 2 --algo knn --folds 3 --out " +
                    out.string())
                .exit_code == 0);
    const RunResult text =
        run_cli("export-report --input " + (out / "knn.report.json").string());
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("Detailed Accuracy By Class") != std::string::npos);

    const RunResult fixtures = run_cli("export-report --fixtures");
    CHECK(fixtures.exit_code == 0);
    CHECK(fixtures.output.find("pond_id,parameter,sample_index,value") == 0);
    CHECK(count_data_rows(fixtures.output) == 400);

    CHECK(run_cli("export-report").exit_code == 2);
    CHECK(run_cli("export-report --input /nonexistent.json").exit_code == 1);
}

TEST_CASE("config file provides defaults that flags override") {
    TempDir dir;
    const fs::path config = dir.path / "run.conf";
    {
        std::ofstream out(config);
        out << "[simulate]\npond=1\nduration=600\ninterval=60\nwarmup=0\nseed=5\n";
    }
    const fs::path out_a = dir.path / "a.csv";
    CHECK(run_cli("--config-file " + config.string() + " simulate --out " + out_a.string())
              .exit_code == 0);
    CHECK(count_data_rows(slurp(out_a)) == 10);

    // Flag beats the file.
    const fs::path out_b = dir.path / "b.csv";
    CHECK(run_cli("--config-file " + config.string() + " simulate --duration 300 --out " +
                  out_b.string())
              .exit_code == 0);
    CHECK(count_data_rows(slurp(out_b)) == 5);
}
