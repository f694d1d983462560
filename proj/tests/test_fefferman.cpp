#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <subh/fefferman.hpp>

using namespace subh;

namespace {
BaseGrid grid9() { return BaseGrid(HeisenbergModel{1}, 9, 1.0, 4); }

const std::vector<std::vector<double>> pts = {
    {0.0, 0.0, 0.0}, {0.3, -0.4, 0.2}, {-0.8, 0.1, 0.9}, {0.5, 0.5, -0.5}};
}

TEST_CASE("lifted metric block structure") {
    const HeisenbergModel m{1};
    for (const auto& p : pts) {
        const auto F = fefferman_matrix(m, p.data());
        const int D = m.dim() + 1;
        REQUIRE(F.rows() == D);
        // symmetric
        CHECK((F - F.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        // fibre-fibre entry vanishes; mixed column is lambda0 / (n+2)
        CHECK(F(D - 1, D - 1) == 0.0);
        const auto l0 = m.lambda0(p.data());
        for (int A = 0; A < m.dim(); ++A)
            CHECK(F(A, D - 1) == Catch::Approx(l0[A] / 3.0).margin(1e-14));
    }
}

TEST_CASE("lifted metric is Lorentzian with constant determinant") {
    const HeisenbergModel m{1};
    const double expected_det = -16.0 / 9.0;  // -4^{2n} / (n+2)^2 at n = 1
    for (const auto& p : pts) {
        const auto F = fefferman_matrix(m, p.data());
        CHECK(F.determinant() == Catch::Approx(expected_det).margin(1e-12));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F);
        int negatives = 0;
        for (int i = 0; i < F.rows(); ++i)
            if (es.eigenvalues()(i) < 0.0) ++negatives;
        CHECK(negatives == 1);
    }
    // n!(n+2) sqrt|det F| equals the contact volume density
    CHECK(1.0 * 3.0 * std::sqrt(-expected_det) ==
          Catch::Approx(HeisenbergModel::volume_density(1)));
}

TEST_CASE("cached metric data matches the pointwise assembly") {
    const auto g = grid9();
    const auto cache = build_fefferman_cache(g);
    const std::size_t i = g.size() / 3;
    const auto F = fefferman_matrix(g.model, g.point(i).data());
    const int D = cache.D;
    for (int r = 0; r < D; ++r)
        for (int s = 0; s < D; ++s)
            CHECK(cache.F[(i * D + r) * D + s] == Catch::Approx(F(r, s)).margin(1e-14));
    CHECK(cache.det[i] == Catch::Approx(F.determinant()).margin(1e-12));
}

TEST_CASE("algebraic identities of the inverse lifted metric") {
    const HeisenbergModel m{1};
    const auto r = inverse_identities_check(m, pts);
    CHECK(r.unit < 1e-12);
    CHECK(r.base_block < 1e-12);
    CHECK(r.lambda_kernel < 1e-12);
    CHECK(r.gamma_row < 1e-12);
    CHECK(r.gamma_pairing < 1e-12);
    const auto rl = reciprocal_levi_check(m, pts);
    CHECK(rl.holo_antiholo < 1e-12);
    CHECK(rl.holo_holo < 1e-12);
}

TEST_CASE("connection of the lifted metric matches the closed-form table") {
    const HeisenbergModel m{1};
    CHECK(connection_lift_check(m, pts, 1e-4) < 1e-10);
}

TEST_CASE("wave operator of a lifted scalar projects to the sublaplacian") {
    const auto g = grid9();
    const LiftGrid lg(g, 8);
    const auto cache = build_fefferman_cache(g);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        u[i] = p[0] * p[0] + p[1] * p[1] + 0.5 * p[0] * p[2];
    }
    CHECK(lee_identity_residual(lg, cache, u, interior_mask(g)) < 1e-10);
}

TEST_CASE("lift and restriction are mutually inverse; lifts are fibre-constant") {
    const auto g = grid9();
    const LiftGrid lg(g, 8);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::sin(g.point(i)[0]);
    const auto U = lift_field(lg, u);
    CHECK(fiber_variation(lg, U) == 0.0);
    const auto back = restrict_to_base(lg, U);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == u[i]);
}

TEST_CASE("lifted operators project to their base counterparts on polynomial maps") {
    const auto g = grid9();
    const LiftGrid lg(g, 8);
    const auto cache = build_fefferman_cache(g);
    const auto tgt = TargetGeometry::flat(2);
    const auto mask = interior_mask(g);
    MapField phi(g, 2);
    SectionField V(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        phi.at(i, 0) = p[0] * p[0] - p[1] * p[2];
        phi.at(i, 1) = p[1] + 0.3 * p[0] * p[2];
        V.at(i, 0) = p[2] * p[2];
        V.at(i, 1) = p[0] * p[1];
    }
    CHECK(tension_lift_residual(lg, cache, tgt, phi, mask) < 1e-9);
    CHECK(rough_laplacian_lift_residual(lg, tgt, phi, V, mask) < 1e-9);
    CHECK(bh_lift_residual(lg, cache, tgt, phi, mask) < 1e-8);
}

TEST_CASE("lifted bienergy is 2 pi times the base bienergy") {
    const auto g = BaseGrid(HeisenbergModel{1}, 13, 1.0, 4);
    const LiftGrid lg(g, 8);
    const auto cache = build_fefferman_cache(g);
    const auto tgt = TargetGeometry::sphere(2);
    const auto phi =
        bump_perturbed_constant(g, {0.1, -0.2}, 0.3, BumpProfile{0.3, 0.85, -1}, 2.0);
    const auto res = energy_lift_ratio(lg, cache, tgt, phi);
    REQUIRE(res.defined);
    CHECK(res.ratio == Catch::Approx(2.0 * std::numbers::pi).epsilon(1e-8));
    CHECK(res.det_residual < 1e-12);

    // the corruption hook moves the ratio off 2 pi
    const auto bad = energy_lift_ratio(lg, cache, tgt, phi, 1.1);
    CHECK(std::abs(bad.ratio - 2.0 * std::numbers::pi) > 0.1);
}

TEST_CASE("fibre frame directions have the advertised causal character") {
    const HeisenbergModel m{1};
    const std::vector<double> origin = {0.0, 0.0, 0.0};
    const auto F = fefferman_matrix(m, origin.data());
    const int D = m.dim() + 1;
    Eigen::VectorXd plus = Eigen::VectorXd::Zero(D), minus = Eigen::VectorXd::Zero(D);
    plus(m.t_axis()) = 1.0;
    minus(m.t_axis()) = 1.0;
    plus(D - 1) = 0.5 * (m.n + 2);
    minus(D - 1) = -0.5 * (m.n + 2);
    CHECK(plus.dot(F * plus) == Catch::Approx(1.0).margin(1e-13));
    CHECK(minus.dot(F * minus) == Catch::Approx(-1.0).margin(1e-13));
}
