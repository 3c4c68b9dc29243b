#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "minsurf/io.hpp"

using namespace minsurf;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path p;
    TempDir() {
        p = fs::temp_directory_path() / ("minsurf_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(p);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(p, ec); }
};
} // namespace

TEST_CASE("doubles round-trip through the 17-digit format") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double v = std::pow(10.0, u(rng)) * (u(rng) > 0 ? 1 : -1);
        REQUIRE(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("support slices survive a CSV round trip bit-for-bit") {
    TempDir tmp;
    auto grid = build_grid(2, 32);
    SupportSlice s = slice_from_function(grid, [](const Eigen::VectorXd& y) {
        return 1.0 + 0.17 * y[0] + 0.081 * y[1] * y[1];
    });
    const fs::path file = tmp.p / "slice.csv";
    save_slice_csv(s, file);
    const SupportSlice back = load_slice_csv(file);
    REQUIRE(back.grid().n_theta() == 32);
    for (int k = 0; k < 32; ++k) REQUIRE(back.h(k) == s.h(k));
}

TEST_CASE("csv reader validates structure") {
    TempDir tmp;
    const fs::path file = tmp.p / "bad.csv";
    write_text_atomic(file, "theta,h\r\n0.0\r\n");
    REQUIRE_THROWS_AS(read_csv(file), ConfigError);
    REQUIRE_THROWS_AS(read_csv(tmp.p / "missing.csv"), ConfigError);
}

TEST_CASE("atomic writes leave no temp files behind") {
    TempDir tmp;
    const fs::path file = tmp.p / "out" / "data.txt";
    write_text_atomic(file, "payload");
    REQUIRE(fs::exists(file));
    REQUIRE(!fs::exists(file.string() + ".tmp"));
}

TEST_CASE("n=3 slice export carries both coordinates") {
    TempDir tmp;
    auto grid = build_grid(3, 8);
    const fs::path file = tmp.p / "slice3.csv";
    save_slice_csv(ball_slice(grid, 2.0), file);
    const CsvTable t = read_csv(file);
    REQUIRE(t.header == std::vector<std::string>{"phi", "lambda", "h"});
    REQUIRE(int(t.rows.size()) == grid->num_nodes());
}
