#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "otoc/io/config.hpp"
#include "otoc/io/csv.hpp"
#include "otoc/io/runner.hpp"

using namespace otoc;

namespace {

const std::filesystem::path work_dir = std::filesystem::path("test_io_out");

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

io::RunConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return io::parse_run_config(in);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(OTOC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const std::string minimal_closed = R"(
engine = exact
scheme = closed
chain.n = 2
chain.couplings = 1.0
observable.w = x0
observable.v = x1
grid.points = 1
output = OUT
)";

} // namespace

TEST_CASE("minimal closed config parses and runs to the expected CSV row") {
    std::filesystem::create_directories(work_dir);
    io::RunConfig cfg = parse_text(minimal_closed);
    CHECK(cfg.scheme == engines::Scheme::closed);
    CHECK(cfg.chain.n_sites == 2);
    cfg.output = (work_dir / "closed_min.csv").string();
    const io::RunResult res = io::run(cfg);
    const std::string text = slurp(res.output_path);
    CHECK(text.find("t,re_F,im_F,abs_F") != std::string::npos);
    CHECK(text.find("\n0,1,0,1\n") != std::string::npos);
    CHECK(res.summary.find("run-summary") == 0);
}

TEST_CASE("schema errors name the offending key") {
    CHECK_THROWS_WITH_AS(parse_text("engine = exact\n"), // missing scheme
                         doctest::Contains("scheme"), io::schema_error);
    CHECK_THROWS_WITH_AS(parse_text(minimal_closed + "bogus.key = 1\n"),
                         doctest::Contains("bogus.key"), io::schema_error);
    CHECK_THROWS_WITH_AS(parse_text("engine = exact\nscheme = fbte\nchain.n = 1\n"
                                    "observable.w = x0\nobservable.v = x0\ngrid.points = 1\n"),
                         doctest::Contains("bath"), io::schema_error);
    CHECK_THROWS_WITH_AS(
        parse_text("engine = exact\nscheme = closed\nchain.n = 1\nobservable.w = x3\n"
                   "observable.v = x0\ngrid.points = 1\n"),
        doctest::Contains("observable.w"), io::schema_error);
}

TEST_CASE("grid construction") {
    io::GridSpec g{0.0, 5.0, 6};
    const auto t = io::grid_times(g);
    REQUIRE(t.size() == 6);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 5.0);
    CHECK(t[1] == doctest::Approx(1.0));
    const auto single = io::grid_times(io::GridSpec{2.0, 9.0, 1});
    CHECK(single == std::vector<double>{2.0});
}

TEST_CASE("decoupled open run reproduces the closed CSV values") {
    std::filesystem::create_directories(work_dir);
    const std::string open_cfg = R"(
engine = exact
scheme = fbte
chain.n = 2
chain.couplings = 1.0
observable.w = x0
observable.v = x1
bath.s = 1
bath.lambda = 0
bath.beta = 1
bath.modes_per_site = 1
bath.n_max = 4
grid.t_min = 0
grid.t_max = 3
grid.points = 5
)";
    io::RunConfig closed = parse_text(minimal_closed);
    closed.grid = io::GridSpec{0.0, 3.0, 5};
    closed.output = (work_dir / "closed.csv").string();
    io::run(closed);

    io::RunConfig open = parse_text(open_cfg);
    open.output = (work_dir / "open.csv").string();
    io::run(open);

    // Compare data rows numerically.
    auto rows = [](const std::string& text) {
        std::vector<std::array<double, 4>> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 't') continue;
            std::array<double, 4> row{};
            std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &row[0], &row[1], &row[2], &row[3]);
            out.push_back(row);
        }
        return out;
    };
    const auto rc = rows(slurp(closed.output));
    const auto ro = rows(slurp(open.output));
    REQUIRE(rc.size() == 5);
    REQUIRE(ro.size() == 5);
    for (std::size_t i = 0; i < rc.size(); ++i) {
        for (int k = 0; k < 4; ++k) CHECK(std::abs(rc[i][k] - ro[i][k]) < 1e-10);
    }
}

TEST_CASE("bound run emits the bound CSV contract with provenance comments") {
    std::filesystem::create_directories(work_dir);
    const std::string cfg_text = R"(
engine = bound
scheme = fbte
chain.n = 20
observable.w = x0
observable.v = x1
bath.s = 3
bath.lambda = 0.1
bath.beta = 100
grid.t_min = 0
grid.t_max = 4
grid.points = 9
)";
    io::RunConfig cfg = parse_text(cfg_text);
    cfg.output = (work_dir / "bound.csv").string();
    const auto res = io::run(cfg);
    const std::string text = slurp(res.output_path);
    CHECK(text.find("t,D_t,D_3t,fbte_factor,pbte_factor,diff_bound") != std::string::npos);
    CHECK(text.find("# ") == 0);
    CHECK(text.find("d_method=closed_zeta") != std::string::npos);
    CHECK(res.summary.find("d_method=closed_zeta") != std::string::npos);
    // 9 data rows.
    std::size_t rows = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line[0] != 't') ++rows;
    }
    CHECK(rows == 9);
}

TEST_CASE("validate reports dimensions and capability problems") {
    io::RunConfig cfg = parse_text(minimal_closed);
    const auto rep = io::validate(cfg);
    CHECK(rep.ok);

    const std::string influence_bad = R"(
engine = influence
scheme = fbte
chain.n = 1
chain.family = transverse_ising
chain.fields_x = 0.5
observable.w = x0
observable.v = x0
bath.lambda = 0.1
bath.mode_omegas = 1.0
bath.mode_couplings = 1.0
grid.points = 1
)";
    const auto rep2 = io::validate(parse_text(influence_bad));
    CHECK(!rep2.ok);
    CHECK(rep2.capability_problem);
    CHECK(rep2.lines.front().find("fields_x[0]") != std::string::npos);

    const std::string too_big = R"(
engine = exact
scheme = fbte
chain.n = 10
observable.w = x0
observable.v = x1
bath.s = 1
bath.lambda = 0.1
bath.modes_per_site = 2
bath.n_max = 8
grid.points = 1
)";
    const auto rep3 = io::validate(parse_text(too_big));
    CHECK(!rep3.ok);
    CHECK(rep3.capability_problem);
}

TEST_CASE("ground initial state runs through the closed engine") {
    std::filesystem::create_directories(work_dir);
    const std::string cfg_text = R"(
engine = exact
scheme = closed
chain.n = 1
chain.fields_z = 1.0
observable.w = x0
observable.v = z0
initial_state = ground
grid.points = 1
)";
    io::RunConfig cfg = parse_text(cfg_text);
    cfg.output = (work_dir / "ground.csv").string();
    io::run(cfg);
    // Ground state of h sz is |1>; at t=0 the string is sx sz sx sz = -I,
    // so F = -<1|I|1> = -1.
    const std::string text = slurp(cfg.output);
    CHECK(text.find("\n0,-1,") != std::string::npos);
}

TEST_CASE("csv formatting is 17-significant-digit stable") {
    CHECK(io::fmt17(1.0) == "1");
    CHECK(io::fmt17(0.1) == "0.10000000000000001");
    const double x = 0.12345678901234567;
    CHECK(std::stod(io::fmt17(x)) == x);
}

TEST_CASE("atomic write leaves no temp file behind") {
    std::filesystem::create_directories(work_dir);
    const auto path = work_dir / "atomic.txt";
    io::write_file_atomic(path.string(), "hello\n");
    CHECK(slurp(path) == "hello\n");
    CHECK(!std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("cli exit codes") {
    std::filesystem::create_directories(work_dir);

    // Schema error -> 1.
    const auto bad_cfg = work_dir / "bad.cfg";
    write_text(bad_cfg, "engine = exact\n");
    CHECK(run_cli("run " + bad_cfg.string()) == 1);

    // Capability error (influence + non-commuting chain) -> 3.
    const auto cap_cfg = work_dir / "cap.cfg";
    write_text(cap_cfg, R"(
engine = influence
scheme = fbte
chain.n = 1
chain.family = transverse_ising
chain.fields_x = 0.5
observable.w = x0
observable.v = x0
bath.lambda = 0.1
bath.mode_omegas = 1.0
bath.mode_couplings = 1.0
grid.points = 1
output = )" + (work_dir / "cap.csv").string() + "\n");
    CHECK(run_cli("run " + cap_cfg.string()) == 3);
    CHECK(run_cli("validate " + cap_cfg.string()) == 3);

    // Working config -> 0 for both run and validate.
    const auto ok_cfg = work_dir / "ok.cfg";
    write_text(ok_cfg, minimal_closed.substr(0, minimal_closed.find("output")) +
                           "output = " + (work_dir / "ok.csv").string() + "\n");
    CHECK(run_cli("validate " + ok_cfg.string()) == 0);
    CHECK(run_cli("run " + ok_cfg.string()) == 0);
}

TEST_CASE("cli produces byte-identical output on repeated runs") {
    std::filesystem::create_directories(work_dir);
    const auto cfg_path = work_dir / "repeat.cfg";
    const auto out_path = work_dir / "repeat.csv";
    write_text(cfg_path, R"(
engine = exact
scheme = fbte
chain.n = 1
observable.w = x0
observable.v = z0
bath.s = 1
bath.lambda = 0.2
bath.beta = 1
bath.mode_omegas = 1.0
bath.mode_couplings = 1.0
bath.n_max = 4
grid.t_min = 0
grid.t_max = 2
grid.points = 5
output = )" + out_path.string() + "\n");

    REQUIRE(run_cli("run " + cfg_path.string()) == 0);
    const std::string first = slurp(out_path);
    REQUIRE(run_cli("run " + cfg_path.string()) == 0);
    CHECK(slurp(out_path) == first);
}
