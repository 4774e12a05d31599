#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("vide_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    [[nodiscard]] std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(VIDE_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli solve writes a trajectory that reads back", "[cli]") {
    Scratch s;
    const auto out = s.file("t.csv");
    REQUIRE(run("solve --lambda 0 --gamma 0 --nodes 11 --x-end 10 --output " + out) == 0);
    std::ifstream in(out);
    const auto t = vide::cli::read_trajectory_csv(in);
    REQUIRE(t.x.size() == 11);
    for (double y : t.values) CHECK(y == 2.0);

    REQUIRE(run("solve --problem example2 --nodes 207 --output " + out) == 0);
    std::ifstream in2(out);
    CHECK(vide::cli::read_trajectory_csv(in2).x.size() == 207);
}

TEST_CASE("cli exit codes", "[cli]") {
    Scratch s;
    const auto out = s.file("x.csv");
    CHECK(run("solve --lambda -3 --gamma 0 --x-end 1000 --nodes 1001 --method explicit --output " + out) == 3);
    CHECK(run("solve --lambda -1 --gamma 0 --nodes 1 --output " + out) == 2);
    CHECK(run("solve --lambda -1 --output " + out) == 2);
    CHECK(run("solve --problem example7 --output " + out) == 2);
    CHECK(run("solve --lambda -1 --gamma 0 --method sideways --output " + out) == 2);
    CHECK(run("stability-region --zmax 0.5 --output " + out) == 2);
    CHECK(run("stability-region --grid 7 --output " + out) == 2);
    CHECK(run("tolerance-search --lambda -1 --gamma 0 --tol -1 --output " + out) == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("") == 2);
}

TEST_CASE("cli stability region raster", "[cli]") {
    Scratch s;
    const auto out = s.file("r.pbm");
    REQUIRE(run("stability-region --grid 2x2 --imax 1000 --output " + out) == 0);
    std::ifstream in(out);
    const auto img = vide::cli::read_pbm(in);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.bits == std::vector<int>{0, 0, 0, 0});

    const auto csv = s.file("r.csv");
    REQUIRE(run("stability-region --grid 2x2 --imax 1000 --format csv --output " + csv) == 0);
    CHECK(slurp(csv) == "z,w,stable,first_exceed_index\n-1,-1,1,0\n0,-1,1,0\n-1,0,1,0\n0,0,1,0\n");
}

TEST_CASE("cli output is identical across thread counts", "[cli]") {
    Scratch s;
    const std::string common = "stability-region --method explicit --zmin -4 --wmin -4 --grid 41x33 --imax 3000 ";
    REQUIRE(run(common + "--threads 1 --output " + s.file("a.pbm")) == 0);
    REQUIRE(run(common + "--threads 4 --output " + s.file("b.pbm")) == 0);
    CHECK(slurp(s.file("a.pbm")) == slurp(s.file("b.pbm")));
    REQUIRE(run(common + "--threads 3 --format pgm --output " + s.file("a.pgm")) == 0);
    REQUIRE(run(common + "--threads 1 --format pgm --output " + s.file("b.pgm")) == 0);
    CHECK(slurp(s.file("a.pgm")) == slurp(s.file("b.pgm")));
}

TEST_CASE("cli reproduce with an empty registry annotates every row", "[cli]") {
    Scratch s;
    const auto reg = s.file("empty.csv");
    std::ofstream(reg).close();
    const auto out = s.file("rep.csv");
    REQUIRE(run("reproduce --table 2 --registry " + reg + " --output " + out) == 0);
    std::istringstream lines(slurp(out));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "example,paper_value,computed_value,ratio,note");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find(",NA,NA,failed") != std::string::npos);
    }
    CHECK(rows == 3);
}

TEST_CASE("cli searches and h-path", "[cli]") {
    Scratch s;
    const auto out = s.file("o.csv");
    REQUIRE(run("stability-search --problem example2 --output " + out) == 0);
    CHECK(slurp(out).rfind("n_nodes,h_s,z,w\n71,", 0) == 0);

    REQUIRE(run("h-path --lambda -14 --gamma -15 --samples 3 --output " + out) == 0);
    CHECK(slurp(out).find("\n1,-14,-15,") != std::string::npos);

    REQUIRE(run("tolerance-search --lambda -2 --gamma -1 --x-end 1 --tol 1e-6 --output " + out) == 0);
    CHECK(slurp(out).rfind("n_nodes,coarse_nodes,error_estimate,true_error\n", 0) == 0);
}
