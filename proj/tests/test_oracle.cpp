#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <subh/oracle.hpp>
#include <subh/report.hpp>

using namespace subh;

namespace {

OracleConfig tiny_config() {
    OracleConfig oc;
    oc.levels = {9, 13};
    oc.fiber_points = 8;
    return oc;
}

}  // namespace

TEST_CASE("the catalogue of check ids is fixed") {
    const auto& names = check_names();
    REQUIRE(names.size() == 18);
    CHECK(names.front() == "self_adjoint");
    CHECK(names.back() == "route_equivalence_tension");
}

TEST_CASE("running an unknown check id throws") {
    const OracleSuite suite(tiny_config());
    CHECK_THROWS_AS(suite.run_check("no_such_check"), std::invalid_argument);
}

TEST_CASE("check results carry the requested name and study data") {
    const OracleSuite suite(tiny_config());
    const auto c = suite.run_check("product_rule");
    CHECK(c.name == "product_rule");
    CHECK_FALSE(c.anchor.empty());
    REQUIRE(c.spacings.size() == 2);
    REQUIRE(c.residuals.size() == 2);
    CHECK(c.spacings[0] > c.spacings[1]);
}

TEST_CASE("repeated runs with the same seed are bitwise deterministic") {
    const OracleSuite suite(tiny_config());
    for (const char* name : {"product_rule", "green_lemma", "inverse_identities"}) {
        const auto a = suite.run_check(name);
        const auto b = suite.run_check(name);
        REQUIRE(a.residuals.size() == b.residuals.size());
        for (std::size_t i = 0; i < a.residuals.size(); ++i)
            CHECK(a.residuals[i] == b.residuals[i]);
        CHECK(a.observed_order == b.observed_order);
    }
}

TEST_CASE("changing the seed changes randomized residuals") {
    OracleConfig a = tiny_config(), b = tiny_config();
    b.seed = a.seed + 1;
    const auto ra = OracleSuite(a).run_check("product_rule");
    const auto rb = OracleSuite(b).run_check("product_rule");
    CHECK(ra.residuals.back() != rb.residuals.back());
}

TEST_CASE("least-squares order fit recovers a power law") {
    const std::vector<double> h = {0.2, 0.1, 0.05};
    std::vector<double> r(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) r[i] = 3.0 * std::pow(h[i], 4.0);
    CHECK(detail::fit_order(h, r) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("exact-class checks pass at any grid size") {
    const OracleSuite suite(tiny_config());
    for (const char* name : {"inverse_identities", "reciprocal_levi", "connection_lift"}) {
        const auto c = suite.run_check(name);
        INFO(name);
        CHECK(c.exact_class);
        CHECK(c.pass);
        CHECK(c.residuals.back() < 1e-10);
    }
}

TEST_CASE("formula corruptions inflate the residual of a targeted check") {
    struct Case {
        Mutation mutation;
        const char* check;
    };
    const Case cases[] = {
        {Mutation::DropMixedTerm, "route_equivalence_rough"},
        {Mutation::DropGammaLaplacian, "route_equivalence_rough"},
        {Mutation::FrameNormalization, "lee_identity"},
        {Mutation::FiberWeight, "energy_ratio"},
    };
    for (const auto& cse : cases) {
        OracleConfig clean = tiny_config(), bad = tiny_config();
        bad.mutation = cse.mutation;
        const auto rc = OracleSuite(clean).run_check(cse.check);
        const auto rb = OracleSuite(bad).run_check(cse.check);
        INFO(cse.check);
        CHECK(rb.residuals.back() > 5.0 * rc.residuals.back());
        CHECK(rb.residuals.back() > 1e-2);
    }
}

TEST_CASE("report serialization is deterministic and omits wall-clock data") {
    const OracleSuite suite(tiny_config());
    VerificationReport rep;
    rep.checks.push_back(suite.run_check("inverse_identities"));
    rep.checks.push_back(suite.run_check("green_lemma"));
    rep.all_pass = rep.checks[0].pass && rep.checks[1].pass;

    const auto j = report_to_json(rep);
    CHECK(j["format"] == "subh verification report v1");
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][0].find("wall_ms") == j["checks"][0].end());

    VerificationReport rep2;
    rep2.checks.push_back(suite.run_check("inverse_identities"));
    rep2.checks.push_back(suite.run_check("green_lemma"));
    rep2.all_pass = rep.all_pass;
    CHECK(report_to_json(rep2).dump(2) == j.dump(2));

    const auto side = report_sidecar_json(rep, "2026-01-01T00:00:00Z");
    CHECK(side["timestamp"] == "2026-01-01T00:00:00Z");
    CHECK(side["wall_ms"].size() == 2);

    const auto text = report_to_text(rep);
    CHECK(text.find("inverse_identities") != std::string::npos);
}
