#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "chmin/field.hpp"
#include "oracles.hpp"

using namespace chmin;

namespace {

ScalarField from_raw(const GridGeometry& g, const std::vector<double>& raw) {
    ScalarField u(g);
    std::copy(raw.begin(), raw.end(), u.values().begin());
    return u;
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("build_grid") {
    const GridGeometry g = build_grid(kDefaultLength, 128);
    CHECK(g.spacing == doctest::Approx(0.0347100).epsilon(1e-5));
    CHECK(g.spacing * g.n == g.length); // N a power of two: exact

    CHECK(build_grid(1.0, 4).spacing == 0.25);
    CHECK(build_grid(kDefaultLength, 64).spacing ==
          doctest::Approx(2.0 * build_grid(kDefaultLength, 128).spacing));

    CHECK_THROWS_AS(build_grid(0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 3), std::invalid_argument);
}

TEST_CASE("sample") {
    const GridGeometry g = build_grid(2.0, 8);

    const ScalarField zero = sample(g, [](double, double) { return 0.0; });
    CHECK(inf_norm(zero) == 0.0);

    const ScalarField phi = eigenfunction(g);
    CHECK(phi(4, 4) == doctest::Approx(1.0).epsilon(1e-12)); // center node, even N
    for (int i = 0; i <= 8; ++i) {
        CHECK(phi(i, 0) == 0.0);
        CHECK(phi(0, i) == 0.0);
        CHECK(phi(i, 8) == 0.0);
        CHECK(phi(8, i) == 0.0);
    }

    const double L = g.length;
    const ScalarField poly = sample(g, [L](double x, double y) {
        return x * (L - x) * y * (L - y) / (L * L * L * L);
    });
    for (int i = 1; i < 8; ++i)
        for (int j = 1; j < 8; ++j) {
            const double x = i * g.spacing, y = j * g.spacing;
            CHECK(poly(i, j) ==
                  doctest::Approx(x * (L - x) * y * (L - y) / (L * L * L * L))
                      .epsilon(1e-15));
        }

    CHECK_THROWS_AS(
        sample(g, [](double x, double) { return 1.0 / (x - x); }),
        std::runtime_error);
}

TEST_CASE("apply_laplacian: zero field and single spike") {
    const GridGeometry g = build_grid(1.0, 8);
    const ScalarField zero(g);
    CHECK(inf_norm(apply_laplacian(zero)) == 0.0);

    ScalarField spike(g);
    spike(4, 5) = 1.0;
    const ScalarField lap = apply_laplacian(spike);
    const double ih2 = 1.0 / (g.spacing * g.spacing);
    CHECK(lap(4, 5) == doctest::Approx(-4.0 * ih2));
    CHECK(lap(3, 5) == doctest::Approx(ih2));
    CHECK(lap(5, 5) == doctest::Approx(ih2));
    CHECK(lap(4, 4) == doctest::Approx(ih2));
    CHECK(lap(4, 6) == doctest::Approx(ih2));
    CHECK(lap(2, 5) == 0.0);
}

TEST_CASE("apply_laplacian reproduces the stencil eigenpair") {
    const GridGeometry g = build_grid(kDefaultLength, 64);
    const ScalarField phi = eigenfunction(g);
    const ScalarField lap = apply_laplacian(phi);
    const double lam = discrete_lambda1(g);
    for (int i = 1; i < g.n; ++i)
        for (int j = 1; j < g.n; ++j)
            CHECK(std::abs(lap(i, j) + lam * phi(i, j)) < 1e-10);
}

TEST_CASE("apply_laplacian is linear") {
    const GridGeometry g = build_grid(1.7, 16);
    const ScalarField u = from_raw(g, oracle::random_interior(16, 1.0, 3));
    const ScalarField v = from_raw(g, oracle::random_interior(16, 1.0, 4));
    const double a = 0.37, b = -1.21;
    ScalarField w(g);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j) w(i, j) = a * u(i, j) + b * v(i, j);
    const ScalarField lw = apply_laplacian(w);
    const ScalarField lu = apply_laplacian(u);
    const ScalarField lv = apply_laplacian(v);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j)
            CHECK(std::abs(lw(i, j) - (a * lu(i, j) + b * lv(i, j))) <
                  1e-13 / (g.spacing * g.spacing));
}

TEST_CASE("discrete Green's identity with zero boundary") {
    const GridGeometry g = build_grid(2.9, 12);
    const ScalarField u = from_raw(g, oracle::random_interior(12, 1.0, 5));
    const ScalarField v = from_raw(g, oracle::random_interior(12, 1.0, 6));
    const double h2 = g.spacing * g.spacing;

    const ScalarField lu = apply_laplacian(u);
    double lhs = 0.0;
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; j <= 12; ++j) lhs += v(i, j) * lu(i, j) * h2;

    double edges = 0.0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j <= 12; ++j)
            edges += (u(i + 1, j) - u(i, j)) * (v(i + 1, j) - v(i, j));
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; j < 12; ++j)
            edges += (u(i, j + 1) - u(i, j)) * (v(i, j + 1) - v(i, j));

    CHECK(lhs == doctest::Approx(-edges).epsilon(1e-10));
}

TEST_CASE("inf_norm") {
    const GridGeometry g = build_grid(1.0, 6);
    ScalarField u(g);
    CHECK(inf_norm(u) == 0.0);
    u(2, 3) = -3.0;
    CHECK(inf_norm(u) == 3.0);
    CHECK(inf_norm(eigenfunction(build_grid(1.0, 8))) == doctest::Approx(1.0));
}

TEST_CASE("discrete_lambda1 against the closed form and the power iteration") {
    const GridGeometry g128 = build_grid(kDefaultLength, 128);
    CHECK(discrete_lambda1(g128) == doctest::Approx(0.99994980160408570).epsilon(1e-12));
    CHECK(discrete_lambda1(g128) < 1.0);

    CHECK(std::abs(discrete_lambda1(build_grid(kDefaultLength, 1024)) - 1.0) < 1e-5);

    for (int n : {8, 16, 32}) {
        const GridGeometry g = build_grid(kDefaultLength, n);
        CHECK(std::abs(discrete_lambda1(g) -
                       oracle::lambda1_power_iteration(n, kDefaultLength)) < 1e-8);
    }

    // monotone approach to the continuum value from below
    double prev = 0.0;
    for (int n : {16, 32, 64, 128}) {
        const double lam = discrete_lambda1(build_grid(kDefaultLength, n));
        CHECK(lam > prev);
        CHECK(lam < continuum_lambda1(build_grid(kDefaultLength, n)));
        prev = lam;
    }
    CHECK(continuum_lambda1(build_grid(kDefaultLength, 16)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("field CSV round trip") {
    const GridGeometry g = build_grid(1.3, 8);
    const ScalarField u = from_raw(g, oracle::random_interior(8, 0.77, 9));
    const auto path = temp_file("chmin_test_field.csv");
    write_field_csv(u, path.string());
    const ScalarField v = read_field_csv(path.string(), g.length);
    REQUIRE(v.n() == u.n());
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) CHECK(v(i, j) == u(i, j));
    std::filesystem::remove(path);
}

TEST_CASE("16-bit PGM dump") {
    const GridGeometry g = build_grid(1.0, 4);
    ScalarField u(g);
    u(2, 2) = 1.0;
    u(1, 1) = -1.0;
    u(1, 2) = 0.0;
    const auto path = temp_file("chmin_test_field.pgm");
    write_field_pgm16(u, path.string());

    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 5);
    CHECK(h == 5);
    CHECK(maxval == 65535);
    in.get(); // single whitespace after the header
    std::vector<unsigned char> bytes(2 * 25);
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    REQUIRE(bool(in));
    const auto sample_at = [&](int i, int j) {
        const std::size_t off = 2 * (std::size_t(j) * 5 + i);
        return int(bytes[off]) * 256 + int(bytes[off + 1]);
    };
    CHECK(sample_at(2, 2) == 65535); // u = +1
    CHECK(sample_at(1, 1) == 0);     // u = -1
    CHECK(sample_at(1, 2) == 32768); // u = 0 -> round(32767.5)
    CHECK(sample_at(0, 0) == 32768);
    std::filesystem::remove(path);
}
