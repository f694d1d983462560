#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <subh/heisenberg.hpp>

using namespace subh;

TEST_CASE("volume density matches the closed form 4^n n!") {
    CHECK(HeisenbergModel::volume_density(1) == Catch::Approx(4.0));
    CHECK(HeisenbergModel::volume_density(2) == Catch::Approx(32.0));
    CHECK(HeisenbergModel::volume_density(3) == Catch::Approx(384.0));
    CHECK_THROWS_AS(HeisenbergModel::volume_density(0), std::invalid_argument);
}

TEST_CASE("contact form annihilates the frame and pairs with the Reeb field") {
    for (int n : {1, 2}) {
        HeisenbergModel m{n};
        const std::vector<double> p = {0.3, -0.7, 0.2, 0.5, -0.1}; // extra entries unused for n=1
        for (int a = 1; a <= 2 * n; ++a) {
            const auto X = m.frame_vector(a, p.data());
            CHECK(std::abs(m.theta(p.data(), X.data())) < 1e-14);
        }
        const auto T = m.reeb();
        CHECK(m.theta(p.data(), T.data()) == Catch::Approx(1.0));
        CHECK_THROWS_AS(m.frame_vector(0, p.data()), std::out_of_range);
        CHECK_THROWS_AS(m.frame_vector(2 * n + 1, p.data()), std::out_of_range);
    }
}

TEST_CASE("frame is orthonormal for the Levi form") {
    HeisenbergModel m{1};
    const std::vector<double> p = {0.4, -0.2, 1.1};
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b) {
            const auto Xa = m.frame_vector(a, p.data());
            const auto Xb = m.frame_vector(b, p.data());
            const double expected = (a == b) ? 1.0 : 0.0;
            CHECK(m.levi_form(p.data(), Xa.data(), Xb.data()) == Catch::Approx(expected).margin(1e-14));
        }
}

TEST_CASE("J squares to minus the identity on horizontal vectors") {
    HeisenbergModel m{2};
    const std::vector<double> p = {0.1, -0.3, 0.6, 0.2, -0.9};
    for (int a = 1; a <= 4; ++a) {
        const auto X = m.frame_vector(a, p.data());
        const auto JX = m.jay(p.data(), X.data());
        const auto JJX = m.jay(p.data(), JX.data());
        for (std::size_t A = 0; A < X.size(); ++A)
            CHECK(JJX[A] == Catch::Approx(-X[A]).margin(1e-14));
    }
}

TEST_CASE("frame coefficients round-trip and reject non-horizontal input") {
    HeisenbergModel m{1};
    const std::vector<double> p = {-0.5, 0.8, 0.0};
    std::vector<double> coeff = {1.3, -0.4};
    const auto v = m.horizontal_from_frame(p.data(), coeff.data());
    const auto back = m.frame_coefficients(p.data(), v.data());
    CHECK(back[0] == Catch::Approx(coeff[0]));
    CHECK(back[1] == Catch::Approx(coeff[1]));
    const auto T = m.reeb();
    CHECK_THROWS_AS(m.frame_coefficients(p.data(), T.data()), std::invalid_argument);
}

TEST_CASE("frame decomposition matrices are mutually inverse") {
    HeisenbergModel m{2};
    const std::vector<double> p = {0.2, 0.7, -0.4, -0.1, 0.9};
    Eigen::MatrixXcd lam, mu;
    m.frame_decomposition(p.data(), lam, mu);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(m.dim(), m.dim());
    CHECK((lam * mu - I).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lambda0 gives the contact components of the coordinate frame") {
    HeisenbergModel m{1};
    const std::vector<double> p = {0.6, -0.3, 0.1};
    const auto l0 = m.lambda0(p.data());
    for (int A = 0; A < m.dim(); ++A) {
        std::vector<double> e(m.dim(), 0.0);
        e[A] = 1.0;
        CHECK(l0[A] == Catch::Approx(m.theta(p.data(), e.data())).margin(1e-14));
    }
}
