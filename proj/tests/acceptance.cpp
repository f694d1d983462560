// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
//
//  1. lifted bienergy ratio is 2 pi (rel 1e-6, 5 sphere + 5 flat maps)
//  2. lift identities converge (order >= 3.5) or sit on the rounding floor
//  3. operator duality Delta = -D*D, pointwise and as an L2 pairing
//  4. self-adjointness (convergent) and nonpositivity (finest level)
//  5. first variation vs FD oracle: rel <= 1e-3 at 33 points/axis, improving
//  6. principal symbol: closed vs defining, degeneracy on the contact form
//  7. algebraic identities of the lifted metric, residual < 1e-10
//  8. flat-target reduction: BH = Delta_b^2 and the descent flow reaches
//     ||BH|| < 1% of its initial value within 2000 steps, monotonically
//  9. every documented formula corruption trips at least one named check
// 10. two identical verify runs produce byte-identical report.json

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <subh/config.hpp>
#include <subh/oracle.hpp>
#include <subh/report.hpp>
#include <subh/variational.hpp>

using namespace subh;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& what) {
    std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// --- criterion 1 ---------------------------------------------------------

void criterion_energy_ratio(const OracleSuite& suite, const OracleConfig& oc) {
    const BaseGrid g = suite.grid(25);
    const LiftGrid lg(g, oc.fiber_points);
    const auto cache = build_fefferman_cache(g);
    Rng rng(oc.seed ^ 0xacce97ULL);
    double worst = 0.0;
    for (const auto& tgt : {suite.sphere_target(), suite.flat_target()})
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<TrigField> comps;
            for (int c = 0; c < oc.nu; ++c)
                comps.push_back(random_trig_field(rng, g.dim(), oc.extent, true, 0.3));
            const auto phi = sample_components(g, comps);
            const auto res = energy_lift_ratio(lg, cache, tgt, phi);
            const double rel = res.defined ? std::abs(res.ratio - 2.0 * std::numbers::pi) /
                                                 (2.0 * std::numbers::pi)
                                           : 1.0;
            worst = std::max(worst, rel);
        }
    std::ostringstream msg;
    msg << "energy ratio 2 pi, worst rel error " << worst << " over 10 maps";
    verdict(1, worst <= 1e-6, msg.str());
}

// --- criteria run through the oracle suite --------------------------------

bool suite_pass(const OracleSuite& suite, const std::string& name, std::string& detail) {
    const auto c = suite.run_check(name);
    std::ostringstream os;
    os << name << " residual " << (c.residuals.empty() ? 0.0 : c.residuals.back())
       << " order " << c.observed_order;
    detail = os.str();
    return c.pass;
}

void criterion_from_checks(int criterion, const OracleSuite& suite,
                           const std::vector<std::string>& names) {
    bool all = true;
    std::string summary;
    for (const auto& name : names) {
        std::string detail;
        const bool ok = suite_pass(suite, name, detail);
        all = all && ok;
        if (!summary.empty()) summary += "; ";
        summary += detail + (ok ? "" : " [FAILED]");
    }
    verdict(criterion, all, summary);
}

void criterion_first_variation(const OracleSuite& suite) {
    const auto c = suite.run_check("first_variation");
    // residuals are indexed by the refinement levels {25, 33, 49}
    const bool at_33 = c.residuals.size() >= 2 && c.residuals[1] <= 1e-3;
    const bool improving = c.residuals.back() <= c.residuals.front();
    std::ostringstream msg;
    msg << "first variation rel errors";
    for (double r : c.residuals) msg << " " << r;
    verdict(5, at_33 && improving && c.pass, msg.str());
}

// --- criterion 8 -----------------------------------------------------------

void criterion_flat_reduction(const OracleSuite& suite, const OracleConfig& oc) {
    // part a: BH_b on the flat target equals the squared sublaplacian
    const BaseGrid g = suite.grid(17);
    const auto tgt = suite.flat_target();
    Rng rng(oc.seed ^ 0xf1a7ULL);
    std::vector<TrigField> comps;
    for (int c = 0; c < oc.nu; ++c)
        comps.push_back(random_trig_field(rng, g.dim(), oc.extent, false, 0.5));
    const auto phi = sample_components(g, comps);
    const auto bh = bh_operator(g, tgt, phi);
    const auto l2 = bi_sublaplacian(g, phi.data, oc.nu);
    double diff = 0.0;
    for (std::size_t k = 0; k < bh.data.size(); ++k)
        diff = std::max(diff, std::abs(bh.data[k] - l2[k]));

    // part b: the descent flow on the bump preset reaches 1% of the initial
    // biharmonic residual within 2000 steps without ever increasing E_{2,b}
    const BaseGrid gf = suite.grid(25);
    const auto phi0 =
        bump_perturbed_constant(gf, {0.0, 0.0}, 0.1, BumpProfile{0.30, 0.55, -1}, 14.0);
    const auto bh0 = bh_operator(gf, tgt, phi0);
    const double bh0_norm = l2_norm(gf, tgt, phi0, bh0);

    FlowConfig fc;
    fc.eta = 1e-3;
    fc.max_steps = 2000;
    fc.stop_tolerance = 0.01 * bh0_norm;
    fc.variation_weight = BumpProfile{0.56, 0.64, 2};
    fc.energy_log_interval = 10;
    const auto res = flow_run(gf, tgt, phi0, fc);

    bool monotone = true;
    double prev = res.trace.samples.front().e2b;
    for (const auto& s : res.trace.samples) {
        if (s.e2b > prev * (1.0 + 1e-14) + 1e-300) monotone = false;
        prev = s.e2b;
    }
    const double final_ratio = res.trace.samples.back().bh_l2 / bh0_norm;
    const bool ok = diff < 1e-10 && !res.trace.aborted && res.trace.converged && monotone &&
                    final_ratio < 0.01;
    std::ostringstream msg;
    msg << "flat BH vs squared sublaplacian diff " << diff << "; flow steps "
        << res.trace.samples.back().step << ", final/initial ||BH|| " << final_ratio
        << (monotone ? ", monotone" : ", NOT monotone");
    verdict(8, ok, msg.str());
}

// --- criterion 9 -----------------------------------------------------------

void criterion_mutations(const OracleConfig& base) {
    struct Case {
        Mutation mutation;
        const char* label;
        const char* check;
    };
    const Case cases[] = {
        {Mutation::CurvatureSign, "curvature_sign", "first_variation"},
        {Mutation::DropMixedTerm, "drop_mixed_term", "route_equivalence_rough"},
        {Mutation::FrameNormalization, "frame_normalization", "lee_identity"},
        {Mutation::DropGammaLaplacian, "drop_gamma_laplacian", "route_equivalence_rough"},
        {Mutation::FiberWeight, "fiber_weight", "energy_ratio"},
    };
    bool all = true;
    std::string summary;
    for (const auto& cse : cases) {
        OracleConfig oc = base;
        oc.mutation = cse.mutation;
        oc.levels = {17, 25};  // corruption residuals are O(1); small grids suffice
        const OracleSuite bad(oc);
        const auto c = bad.run_check(cse.check);
        const bool tripped = !c.pass;
        all = all && tripped;
        if (!summary.empty()) summary += "; ";
        summary += std::string(cse.label) + (tripped ? " -> " : " MISSED by ") + cse.check;
    }
    verdict(9, all, summary);
}

// --- criterion 10 ----------------------------------------------------------

void criterion_determinism() {
    const fs::path dir = fs::temp_directory_path() / "subh_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "verify.cfg";
    {
        std::ofstream os(cfg);
        os << "verify.levels = 13,17\n"
           << "grid.fiber = 8\n"
           << "seed = 424242\n";
    }
    const std::string checks =
        " --check self_adjoint --check energy_ratio --check inverse_identities";
    auto run = [&](const std::string& out) {
        const std::string cmd = std::string(SUBH_CLI_PATH) + " verify --config " +
                                cfg.string() + checks + " --out " + (dir / out).string() +
                                " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const int c1 = run("a");
    const int c2 = run("b");
    const std::string a = slurp(dir / "a" / "report.json");
    const std::string b = slurp(dir / "b" / "report.json");
    const bool ok = c1 == c2 && !a.empty() && a == b;
    std::ostringstream msg;
    msg << "two verify runs, exit codes " << c1 << "/" << c2 << ", report.json "
        << (a == b && !a.empty() ? "byte-identical" : "DIFFERS");
    verdict(10, ok, msg.str());
}

}  // namespace

int main() {
    const OracleConfig oc;  // library defaults: n=1, nu=2, levels {25,33,49}
    const OracleSuite suite(oc);

    criterion_energy_ratio(suite, oc);
    criterion_from_checks(2, suite,
                          {"lee_identity", "tension_lift", "rough_laplacian_lift", "bh_lift"});
    criterion_from_checks(3, suite, {"dstar_d"});
    criterion_from_checks(4, suite, {"self_adjoint", "nonpositive"});
    criterion_first_variation(suite);
    criterion_from_checks(6, suite, {"symbol"});
    criterion_from_checks(7, suite, {"inverse_identities", "reciprocal_levi"});
    criterion_flat_reduction(suite, oc);
    criterion_mutations(oc);
    criterion_determinism();

    if (failures == 0) {
        std::printf("ACCEPTANCE: all 10 criteria passed\n");
        return 0;
    }
    std::printf("ACCEPTANCE: %d criteria FAILED\n", failures);
    return 1;
}
