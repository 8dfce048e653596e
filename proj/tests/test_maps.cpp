#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "rcon/maps.hpp"
#include "rcon/rng.hpp"

using namespace rcon;

namespace {

// Independent central finite-difference oracle.
double fd_deriv(const std::function<double(double)>& f, double x, double step = 1e-6) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

std::vector<double> random_grid(double lo, double hi, int count, std::uint64_t seed) {
    RngStream rng = RngStream::keyed(seed, StreamTag::expectation, 99);
    std::vector<double> xs(count);
    for (auto& x : xs) x = lo + (hi - lo) * rng.uniform01();
    std::sort(xs.begin(), xs.end());
    return xs;
}

}  // namespace

TEST_CASE("transmit map values") {
    CHECK(TransmitMap::identity()(3.7) == 3.7);

    const double rho = std::pow(10.0, 1.5);
    const TransmitMap h = TransmitMap::scaled_atan(rho, 0.01);
    // atan saturates: h(x) -> sqrt(rho) as x -> infinity.
    CHECK_THAT(h(1e6), Catch::Matchers::WithinRel(std::sqrt(rho), 1e-4));
    CHECK(h(1e6) * h(1e6) <= rho);
    CHECK(h(-1e6) * h(-1e6) <= rho);

    // derivative at the origin equals sqrt(rho) * s
    CHECK_THAT(h.deriv(0.0), Catch::Matchers::WithinRel(std::sqrt(rho) * 0.01, 1e-12));
    CHECK_THAT(fd_deriv([&](double x) { return h(x); }, 0.0),
               Catch::Matchers::WithinRel(std::sqrt(rho) * 0.01, 1e-6));

    const TransmitMap ht = TransmitMap::tanh_scaled(4.0, 0.5);
    CHECK_THAT(ht(1e6), Catch::Matchers::WithinRel(2.0, 1e-12));
    CHECK(ht.deriv_bound() == 2.0 * 0.5);

    const TransmitMap hc = TransmitMap::linear_clip(9.0);
    CHECK(hc(2.0) == 2.0);
    CHECK(hc(100.0) == 3.0);
    CHECK(hc(-100.0) == -3.0);
    CHECK(hc.deriv(2.0) == 1.0);
    CHECK(hc.deriv(100.0) == 0.0);
}

TEST_CASE("receive map values") {
    CHECK(ReceiveMap::tanh_scaled(5.0)(0.0) == 0.0);
    CHECK_THAT(ReceiveMap::rational(1.5)(2.0), Catch::Matchers::WithinRel(0.75, 1e-15));
    CHECK_THAT(ReceiveMap::scaled_atan(3.0, 0.05)(20.0),
               Catch::Matchers::WithinRel(3.0 * std::atan(1.0), 1e-15));
    CHECK(ReceiveMap::identity()(3.25) == 3.25);
}

TEST_CASE("receive maps are odd bit-exactly") {
    const std::vector<ReceiveMap> maps = {
        ReceiveMap::identity(), ReceiveMap::tanh_scaled(5.0), ReceiveMap::rational(1.5),
        ReceiveMap::scaled_atan(3.0, 0.05), ReceiveMap::tanh_scaled(2.0).scaled(10.0)};
    for (const auto& f : maps)
        for (double x : random_grid(-40.0, 40.0, 200, 1)) CHECK(f(-x) == -f(x));
}

TEST_CASE("maps strictly increase on sorted grids") {
    const auto grid = random_grid(-8.0, 8.0, 300, 2);
    const std::vector<ReceiveMap> fs = {ReceiveMap::identity(), ReceiveMap::tanh_scaled(2.0),
                                        ReceiveMap::rational(2.0),
                                        ReceiveMap::scaled_atan(1.0, 0.5)};
    for (const auto& f : fs)
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] - grid[i - 1] > 1e-15) CHECK(f(grid[i]) > f(grid[i - 1]));

    const std::vector<TransmitMap> hs = {TransmitMap::identity(),
                                         TransmitMap::scaled_atan(10.0, 0.3),
                                         TransmitMap::tanh_scaled(10.0, 0.3)};
    for (const auto& h : hs)
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] - grid[i - 1] > 1e-15) CHECK(h(grid[i]) > h(grid[i - 1]));

    // linear_clip is strictly increasing only inside the knee.
    const TransmitMap hc = TransmitMap::linear_clip(16.0);
    const auto inner = random_grid(-3.9, 3.9, 100, 3);
    for (std::size_t i = 1; i < inner.size(); ++i)
        if (inner[i] - inner[i - 1] > 1e-15) CHECK(hc(inner[i]) > hc(inner[i - 1]));
}

TEST_CASE("bounds") {
    CHECK(ReceiveMap::tanh_scaled(3.0).bound() == 1.0);
    CHECK(ReceiveMap::rational(2.0).bound() == 1.0);
    CHECK(ReceiveMap::scaled_atan(3.0, 0.05).bound() == 3.0 * kPi / 2.0);
    CHECK(std::isinf(ReceiveMap::identity().bound()));
    for (double x : {-1e6, -3.0, 0.5, 1e6}) {
        CHECK(std::fabs(ReceiveMap::tanh_scaled(3.0)(x)) <= 1.0);
        CHECK(std::fabs(ReceiveMap::scaled_atan(3.0, 0.05)(x)) <= 3.0 * kPi / 2.0);
    }
    // sup h^2 equals the configured power at the saturation limit.
    const TransmitMap h = TransmitMap::tanh_scaled(7.5, 1.0);
    CHECK_THAT(h(1e6) * h(1e6), Catch::Matchers::WithinRel(7.5, 1e-12));
}

TEST_CASE("derivatives match finite differences") {
    const std::vector<ReceiveMap> fs = {ReceiveMap::identity(), ReceiveMap::tanh_scaled(2.0),
                                        ReceiveMap::rational(1.5),
                                        ReceiveMap::scaled_atan(3.0, 0.05),
                                        ReceiveMap::rational(2.0).scaled(0.5)};
    for (const auto& f : fs)
        for (double x : random_grid(-2.5, 2.5, 60, 4)) {
            const double fd = fd_deriv([&](double u) { return f(u); }, x);
            CHECK_THAT(f.deriv(x), Catch::Matchers::WithinRel(fd, 1e-6));
        }
    const std::vector<TransmitMap> hs = {TransmitMap::scaled_atan(5.0, 0.4),
                                         TransmitMap::tanh_scaled(5.0, 0.4)};
    for (const auto& h : hs)
        for (double x : random_grid(-2.5, 2.5, 60, 5)) {
            const double fd = fd_deriv([&](double u) { return h(u); }, x);
            CHECK_THAT(h.deriv(x), Catch::Matchers::WithinRel(fd, 1e-6));
        }
}

TEST_CASE("scaling multiplies values and derivatives") {
    const ReceiveMap f = ReceiveMap::rational(2.0);
    const ReceiveMap f2 = f.scaled(2.0);
    for (double x : random_grid(-5.0, 5.0, 50, 6)) {
        CHECK(f2(x) == 2.0 * f(x));
        CHECK(f2.deriv(x) == 2.0 * f.deriv(x));
    }
    CHECK(f2.bound() == 2.0 * f.bound());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TransmitMap::scaled_atan(-1.0, 0.1), param_error);
    CHECK_THROWS_AS(TransmitMap::tanh_scaled(1.0, 0.0), param_error);
    CHECK_THROWS_AS(ReceiveMap::rational(-2.0), param_error);
    CHECK_THROWS_AS(ReceiveMap::scaled_atan(0.0, 1.0), param_error);
    CHECK_THROWS_AS(ReceiveMap::tanh_scaled(1.0).scaled(0.0), param_error);
}
