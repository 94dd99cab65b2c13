#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ghosttrack/csv.hpp"
#include "ghosttrack/errors.hpp"
#include "ghosttrack/pgm.hpp"
#include "ghosttrack/speckle.hpp"

using namespace ghosttrack;

TEST_CASE("pgm: write then read returns the raster") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        Image8 img(1 + static_cast<int>(rng() % 20), 1 + static_cast<int>(rng() % 20));
        for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<std::uint8_t>(rng());
        std::stringstream ss;
        write_pgm(ss, img);
        const auto back = read_pgm(ss);
        CHECK(back.maxval == 255);
        CHECK(back.pixels.cast<std::uint8_t>() == img);
    }
}

TEST_CASE("pgm: header layout") {
    std::stringstream ss;
    write_pgm(ss, Image8::Zero(2, 3));
    CHECK(ss.str().substr(0, 11) == "P5\n3 2\n255\n");
    CHECK(ss.str().size() == 11 + 6);
}

TEST_CASE("pgm: comments and 16-bit samples") {
    std::stringstream ss;
    ss << "P5 # magic\n# comment line\n2 1\n# another\n1000\n";
    const unsigned char px[4] = {0x03, 0xE8, 0x01, 0xF4};
    ss.write(reinterpret_cast<const char*>(px), 4);
    const auto img = read_pgm(ss);
    CHECK(img.maxval == 1000);
    CHECK(img.pixels(0, 0) == 1000);
    CHECK(img.pixels(0, 1) == 500);
}

TEST_CASE("pgm: malformed input") {
    std::stringstream ascii("P2\n1 1\n255\n0\n");
    CHECK_THROWS_AS(read_pgm(ascii), ConfigError);
    std::stringstream truncated("P5\n4 4\n255\nabc");
    CHECK_THROWS_AS(read_pgm(truncated), ConfigError);
    std::stringstream over("P5\n1 1\n10\n\x20");
    CHECK_THROWS_AS(read_pgm(over), ConfigError);
    CHECK_THROWS_AS(read_pgm(std::filesystem::path("/nonexistent/ghosttrack.pgm")), IoError);
}

TEST_CASE("pgm: min-max grey mapping") {
    ImageD img(1, 3);
    img << -2.0, 0.0, 2.0;
    const Image8 g = to_gray8(img);
    CHECK(g(0, 0) == 0);
    CHECK(g(0, 1) == 128);
    CHECK(g(0, 2) == 255);
    CHECK(to_gray8(ImageD::Constant(2, 2, 3.0)).isZero());
}

TEST_CASE("pgm: speckle frames map on to 255 even when all on") {
    const SpeckleConfig cfg{.fov_width = 4, .fov_height = 4, .bernoulli_p = 1.0, .on_value = 3.0, .off_value = 1.0};
    const auto stack = generate_stack(cfg, 1, 1);
    const auto path = std::filesystem::temp_directory_path() / "ghosttrack_speckle.pgm";
    write_speckle_pgm(path, stack[0], cfg);
    const auto img = read_pgm(path);
    CHECK((img.pixels.array() == 255).all());
    std::filesystem::remove(path);
}

TEST_CASE("csv: six significant digits") {
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(3.14159265) == "3.14159");
    CHECK(format_real(123456789.0) == "1.23457e+08");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(parse_real("inf") == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_real("1.5x"), ConfigError);
}

TEST_CASE("csv: reader") {
    std::stringstream ss("a,b\r\n1,2\n\n3,4\n");
    const auto t = read_csv(ss);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][t.column("b")] == "4");
    CHECK_THROWS_AS(t.column("c"), ConfigError);
    std::stringstream ragged("a,b\n1\n");
    CHECK_THROWS_AS(read_csv(ragged), ConfigError);
}
