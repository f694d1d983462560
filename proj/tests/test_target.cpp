#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <subh/target.hpp>

using namespace subh;

namespace {
const std::vector<std::vector<double>> sample_points = {
    {0.0, 0.0}, {0.3, -0.4}, {-0.7, 0.2}, {0.55, 0.85}};
}

TEST_CASE("flat target has identity metric and no curvature") {
    const auto tgt = TargetGeometry::flat(3);
    const double y[3] = {1.5, -2.0, 0.3};
    const auto h = tgt.metric(y);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(h[i * 3 + j] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-15));
    for (double g : tgt.christoffel(y)) CHECK(g == 0.0);
    const double u[3] = {1, 0, 0}, v[3] = {0, 1, 0}, w[3] = {0, 0, 1};
    for (double r : tgt.curvature(y, u, v, w)) CHECK(r == 0.0);
}

TEST_CASE("sphere Christoffel symbols match the finite-difference oracle") {
    const auto tgt = TargetGeometry::sphere(2);
    for (const auto& y : sample_points) {
        const auto G = tgt.christoffel(y.data());
        const auto Gfd = tgt.christoffel_fd_oracle(y.data());
        for (std::size_t q = 0; q < G.size(); ++q)
            CHECK(G[q] == Catch::Approx(Gfd[q]).margin(1e-7));
    }
}

TEST_CASE("sphere curvature matches the finite-difference oracle") {
    const auto tgt = TargetGeometry::sphere(2);
    const double u[2] = {0.8, -0.3}, v[2] = {0.1, 1.2}, w[2] = {-0.5, 0.4};
    for (const auto& y : sample_points) {
        const auto R = tgt.curvature(y.data(), u, v, w);
        const auto Rfd = tgt.curvature_fd_oracle(y.data(), u, v, w);
        for (int i = 0; i < 2; ++i) CHECK(R[i] == Catch::Approx(Rfd[i]).margin(1e-6));
    }
}

TEST_CASE("round sphere has constant sectional curvature one") {
    const auto tgt = TargetGeometry::sphere(3);
    const double u[3] = {0.9, 0.1, -0.4}, v[3] = {-0.2, 0.7, 0.5};
    for (const auto& y2 : sample_points) {
        const double y[3] = {y2[0], y2[1], 0.25};
        const auto h = tgt.metric(y);
        auto inner = [&](const double* a, const double* b) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc += h[i * 3 + j] * a[i] * b[j];
            return acc;
        };
        const auto R = tgt.curvature(y, u, v, v);
        const double num = inner(R.data(), u);
        const double den = inner(u, u) * inner(v, v) - inner(u, v) * inner(u, v);
        CHECK(num / den == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("curvature sign hook flips the tensor") {
    auto tgt = TargetGeometry::sphere(2);
    auto flipped = tgt;
    flipped.curvature_sign = -1.0;
    const double y[2] = {0.3, -0.2}, u[2] = {1, 0}, v[2] = {0, 1}, w[2] = {0.5, 0.5};
    const auto R = tgt.curvature(y, u, v, w);
    const auto Rm = flipped.curvature(y, u, v, w);
    for (int i = 0; i < 2; ++i) CHECK(R[i] == Catch::Approx(-Rm[i]).margin(1e-14));
}

TEST_CASE("chart bound is enforced") {
    auto tgt = TargetGeometry::sphere(2);
    tgt.chart_bound = 1.0;
    const double y[2] = {3.0, 4.0};
    CHECK_THROWS_AS(tgt.metric(y), ChartOverflow);
    CHECK_THROWS_AS(tgt.christoffel(y), ChartOverflow);
}
