#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "helpers.hpp"
#include "slimrank/data.hpp"

using namespace slimrank;
namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("SLIMRANK_CLI");
    REQUIRE_MESSAGE(env != nullptr,
                    "SLIMRANK_CLI must point at the slimrank binary");
    return env;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() /
              ("slimrank_cli_" + std::to_string(::getpid()) + "_" +
               std::to_string(next()));
        fs::create_directories(dir);
        // small but non-trivial dataset
        auto rng = testing::make_rng(77);
        std::ofstream out(dir / "data.tsv");
        for (int u = 0; u < 40; ++u)
            for (int i = 0; i < 16; ++i)
                if (testing::unit(rng) < 0.35)
                    out << u << '\t' << i << '\t'
                        << (1 + static_cast<int>(testing::unit(rng) * 5))
                        << '\n';
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string data() const { return (dir / "data.tsv").string(); }
    std::string path(const std::string& name) const {
        return (dir / name).string();
    }
    static int next() {
        static int c = 0;
        return c++;
    }
};

std::string solver_flags() {
    return "--alpha 0.5 --beta 0.5 --mu0 1 --delta 0.1 --quiet";
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)),
                   std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)),
                   std::istreambuf_iterator<char>());
    return !sa.empty() && sa == sb;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("train writes the full artifact set") {
    Workspace ws;
    const int code = run_cli("train --data " + ws.data() + " --out " +
                             ws.path("run") + " " + solver_flags());
    CHECK(code == 0);
    for (const char* f : {"w.bin", "w.tsv", "report.txt", "trace.tsv",
                          "manifest.txt", "users.map", "items.map"})
        CHECK(fs::exists(ws.dir / "run" / f));
}

TEST_CASE("input errors exit with code 1") {
    Workspace ws;
    CHECK(run_cli("train --data " + ws.path("absent.tsv") + " --out " +
                  ws.path("x") + " " + solver_flags()) == 1);
    CHECK(run_cli("train --data " + ws.data() + " --out " + ws.path("x") +
                  " --gamma 0.9 --quiet") == 1);
    CHECK(run_cli("train --data " + ws.data()) == 1);   // no --out, no env
    CHECK(run_cli("cv --data " + ws.data() + " --out " + ws.path("x") +
                  " --model bogus --quiet") == 1);
}

TEST_CASE("cv produces the per-fold table with a mean row") {
    Workspace ws;
    const int code =
        run_cli("cv --data " + ws.data() + " --out " + ws.path("cv") + " " +
                solver_flags() + " --folds 3 --n 5,10 --jobs 2");
    CHECK(code == 0);
    std::ifstream in(ws.dir / "cv" / "results.tsv");
    std::string line, header, last;
    std::getline(in, header);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    CHECK(header == "fold\thr@5\thr@10\tarhr@5\tarhr@10");
    CHECK(rows == 4);   // 3 folds + mean
    CHECK(last.starts_with("mean\t"));
}

TEST_CASE("cv with itemknn") {
    Workspace ws;
    CHECK(run_cli("cv --data " + ws.data() + " --out " + ws.path("knn") +
                  " --model itemknn --k 5 --folds 2 --n 10 --quiet") == 0);
    CHECK(fs::exists(ws.dir / "knn" / "summary.txt"));
}

TEST_CASE("re-running from a manifest reproduces w.bin bitwise") {
    Workspace ws;
    REQUIRE(run_cli("train --data " + ws.data() + " --out " + ws.path("a") +
                    " " + solver_flags() + " --seed 9") == 0);
    REQUIRE(run_cli("train --data " + ws.data() + " --out " + ws.path("b") +
                    " --from-manifest " + ws.path("a/manifest.txt") +
                    " --quiet") == 0);
    CHECK(same_bytes(ws.dir / "a" / "w.bin", ws.dir / "b" / "w.bin"));
}

TEST_CASE("inspect reports statistics and flags corrupt artifacts") {
    Workspace ws;
    REQUIRE(run_cli("train --data " + ws.data() + " --out " + ws.path("run") +
                    " " + solver_flags()) == 0);
    CHECK(run_cli("inspect --run " + ws.path("run")) == 0);
    CHECK(run_cli("inspect --run " + ws.path("nothere")) == 1);

    // corrupt the artifact: flip one diagonal entry to a nonzero value
    {
        std::fstream f(ws.dir / "run" / "w.bin",
                       std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(4 + 8);   // past magic + size, entry (0,0)
        const double bad = 0.5;
        f.write(reinterpret_cast<const char*>(&bad), sizeof bad);
    }
    CHECK(run_cli("inspect --run " + ws.path("run")) == 1);
}

TEST_CASE("sweep writes the grid table; single-point grid matches cv") {
    Workspace ws;
    REQUIRE(run_cli("sweep --data " + ws.data() + " --out " + ws.path("sw") +
                    " " + solver_flags() +
                    " --folds 2 --n 10 --grid-alpha 0.5") == 0);
    std::ifstream in(ws.dir / "sw" / "sweep.tsv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "alpha\tbeta\tdelta\tmu0\tn\thr\tarhr");
    REQUIRE(!row.empty());

    REQUIRE(run_cli("cv --data " + ws.data() + " --out " + ws.path("cvref") +
                    " " + solver_flags() + " --folds 2 --n 10") == 0);
    std::ifstream cv_in(ws.dir / "cvref" / "results.tsv");
    std::string cv_header, l1, l2, cv_mean;
    std::getline(cv_in, cv_header);
    std::getline(cv_in, l1);
    std::getline(cv_in, l2);
    std::getline(cv_in, cv_mean);
    // mean hr@10 from cv equals the sweep row's hr
    const std::string mean_hr = cv_mean.substr(cv_mean.find('\t') + 1);
    const std::string hr_cell = mean_hr.substr(0, mean_hr.find('\t'));
    CHECK(row.find("\t" + hr_cell + "\t") != std::string::npos);

    // two-axis grids are fine, three are rejected before any work
    CHECK(run_cli("sweep --data " + ws.data() + " --out " + ws.path("sw3") +
                  " --quiet --grid-alpha 1 --grid-beta 1 --grid-mu0 1") == 1);
    CHECK(run_cli("sweep --data " + ws.data() + " --out " + ws.path("sw0") +
                  " --quiet") == 1);
}

TEST_CASE("numerical failures exit with code 2") {
    Workspace ws;
    // values this large overflow the Gram matrix into Inf and the solve
    // degenerates; whichever guard fires first must map to exit 2
    std::ofstream out(ws.dir / "huge.tsv");
    out << "0\t0\t1e200\n1\t1\t1e200\n";
    out.close();
    const int code = run_cli("train --data " + ws.path("huge.tsv") +
                             " --out " + ws.path("h") + " " + solver_flags() +
                             " --max-outer 3");
    CHECK(code == 2);
}

}  // TEST_SUITE
