#pragma once

// Named verification checks with refinement studies and machine-readable
// verdicts. Randomized inputs are band-limited trigonometric fields (at most
// two modes per axis) defined in closed form, so every refinement level
// samples the same smooth function and the studies measure stencil error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fefferman.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "target.hpp"
#include "variational.hpp"

namespace subh {

// deterministic uniform double from the raw 64-bit stream; avoids the
// implementation-defined std::uniform_real_distribution
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform(double a, double b) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// a closed-form scalar: sum of <=2 separable trig modes, optionally tapered
// by a separable bump, evaluated identically at every refinement level
struct TrigField {
    struct Mode {
        double amp;
        std::vector<int> freq;     // per axis
        std::vector<double> phase; // per axis
    };
    std::vector<Mode> modes;
    bool bumped = false;
    BumpProfile prof{0.30, 0.85, -1};
    double extent = 1.0;

    double operator()(const std::vector<double>& p) const {
        double acc = 0.0;
        const double w0 = 0.5 * std::numbers::pi / extent;
        for (const auto& m : modes) {
            double v = m.amp;
            for (std::size_t ax = 0; ax < p.size(); ++ax)
                v *= std::cos(m.freq[ax] * w0 * p[ax] + m.phase[ax]);
            acc += v;
        }
        if (bumped)
            for (std::size_t ax = 0; ax < p.size(); ++ax) acc *= bump_1d(p[ax] / extent, prof);
        return acc;
    }
};

inline TrigField random_trig_field(Rng& rng, int naxes, double extent, bool bumped,
                                   double amp = 1.0) {
    TrigField f;
    f.bumped = bumped;
    f.extent = extent;
    const int nmodes = 2;
    for (int m = 0; m < nmodes; ++m) {
        TrigField::Mode mode;
        mode.amp = amp * rng.uniform(0.4, 1.0) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        for (int ax = 0; ax < naxes; ++ax) {
            mode.freq.push_back(rng.uniform_int(1, 2));
            mode.phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
        f.modes.push_back(mode);
    }
    return f;
}

inline std::vector<double> sample_scalar(const BaseGrid& g, const TrigField& f) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.point(i));
    return out;
}

inline MapField sample_components(const BaseGrid& g, const std::vector<TrigField>& comps) {
    MapField out(g, static_cast<int>(comps.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        for (int c = 0; c < out.ncomp; ++c) out.at(i, c) = comps[c](p);
    }
    return out;
}

enum class Mutation {
    None,
    CurvatureSign,       // flip the sign of the target curvature tensor
    DropMixedTerm,       // omit the first-order term of the expanded rough sublaplacian
    FrameNormalization,  // use the unnormalized frame (s = 1)
    DropGammaLaplacian,  // omit the Gamma * Delta_b(phi) term of the expanded formula
    FiberWeight,         // corrupt the fiber measure in the lifted bienergy
};

struct OracleConfig {
    int n = 1;
    int nu = 2;
    double extent = 1.0;
    int stencil_order = 4;
    std::vector<int> levels{25, 33, 49};
    int fiber_points = 8;
    std::uint64_t seed = 20260826;
    Mutation mutation = Mutation::None;
};

struct CheckResult {
    std::string name;
    std::string anchor;
    std::vector<double> spacings;
    std::vector<double> residuals;
    double observed_order = 0.0;
    double threshold_order = 3.5;
    double floor = 1e-10;
    bool exact_class = false;
    bool pass = false;
    std::map<std::string, double> details;
    double wall_ms = 0.0;  // excluded from the deterministic report
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;
};

inline const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "self_adjoint",        "nonpositive",      "dstar_d",
        "product_rule",        "leibniz",          "symbol",
        "first_variation",     "lee_identity",     "tension_lift",
        "energy_ratio",        "inverse_identities", "reciprocal_levi",
        "connection_lift",     "rough_laplacian_lift", "bh_lift",
        "green_lemma",         "route_equivalence_rough", "route_equivalence_tension"};
    return names;
}

namespace detail {

inline double fit_order(const std::vector<double>& h, const std::vector<double>& r) {
    // least-squares slope of log(residual) against log(spacing)
    if (h.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double tiny = 1e-300;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(r[i], tiny));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double nl = static_cast<double>(h.size());
    return (nl * sxy - sx * sy) / (nl * sxx - sx * sx);
}

inline void finish(CheckResult& c) {
    c.observed_order = fit_order(c.spacings, c.residuals);
    const double last = c.residuals.empty() ? 0.0 : c.residuals.back();
    if (c.exact_class)
        c.pass = last <= c.floor;
    else
        c.pass = (c.observed_order >= c.threshold_order) || (last <= c.floor);
}

inline double masked_max(const std::vector<double>& f, const std::vector<bool>& mask,
                         int ncomp = 1) {
    double m = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        for (int c = 0; c < ncomp; ++c) m = std::max(m, std::abs(f[i * ncomp + c]));
    }
    return m;
}

struct LevelData {
    BaseGrid grid;
    TargetGeometry tgt;
};

}  // namespace detail

class OracleSuite {
  public:
    explicit OracleSuite(const OracleConfig& cfg) : cfg_(cfg) {}

    CheckResult run_check(const std::string& name) const {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult c;
        c.name = name;
        if (name == "self_adjoint") check_self_adjoint(c);
        else if (name == "nonpositive") check_nonpositive(c);
        else if (name == "dstar_d") check_dstar_d(c);
        else if (name == "product_rule") check_product_rule(c);
        else if (name == "leibniz") check_leibniz(c);
        else if (name == "symbol") check_symbol(c);
        else if (name == "first_variation") check_first_variation(c);
        else if (name == "lee_identity") check_lee_identity(c);
        else if (name == "tension_lift") check_tension_lift(c);
        else if (name == "energy_ratio") check_energy_ratio(c);
        else if (name == "inverse_identities") check_inverse_identities(c);
        else if (name == "reciprocal_levi") check_reciprocal_levi(c);
        else if (name == "connection_lift") check_connection_lift(c);
        else if (name == "rough_laplacian_lift") check_rough_laplacian_lift(c);
        else if (name == "bh_lift") check_bh_lift(c);
        else if (name == "green_lemma") check_green_lemma(c);
        else if (name == "route_equivalence_rough") check_route_equivalence_rough(c);
        else if (name == "route_equivalence_tension") check_route_equivalence_tension(c);
        else throw std::invalid_argument("unknown check id: " + name);
        const auto t1 = std::chrono::steady_clock::now();
        c.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return c;
    }

    VerificationReport run_all() const {
        VerificationReport rep;
        for (const auto& name : check_names()) {
            rep.checks.push_back(run_check(name));
            rep.all_pass = rep.all_pass && rep.checks.back().pass;
        }
        return rep;
    }

    // --- shared construction ---------------------------------------------

    HeisenbergModel model() const {
        HeisenbergModel m;
        m.n = cfg_.n;
        if (cfg_.mutation == Mutation::FrameNormalization) m.s = 1.0;
        return m;
    }

    TargetGeometry sphere_target() const {
        auto t = TargetGeometry::sphere(cfg_.nu);
        if (cfg_.mutation == Mutation::CurvatureSign) t.curvature_sign = -1.0;
        return t;
    }

    TargetGeometry flat_target() const { return TargetGeometry::flat(cfg_.nu); }

    BaseGrid grid(int npts) const { return BaseGrid(model(), npts, cfg_.extent, cfg_.stencil_order); }

    RoughExpansionOptions expansion_options() const {
        RoughExpansionOptions o;
        o.drop_mixed_term = cfg_.mutation == Mutation::DropMixedTerm;
        o.drop_gamma_laplacian = cfg_.mutation == Mutation::DropGammaLaplacian;
        return o;
    }

    double fiber_weight() const { return cfg_.mutation == Mutation::FiberWeight ? 1.1 : 1.0; }

    // map staying well inside the sphere chart
    MapField random_sphere_map(Rng& rng, const BaseGrid& g, bool bumped = false) const {
        std::vector<TrigField> comps;
        for (int c = 0; c < cfg_.nu; ++c)
            comps.push_back(random_trig_field(rng, g.dim(), cfg_.extent, bumped, 0.25));
        return sample_components(g, comps);
    }

    SectionField random_section(Rng& rng, const BaseGrid& g, bool bumped) const {
        std::vector<TrigField> comps;
        for (int c = 0; c < cfg_.nu; ++c)
            comps.push_back(random_trig_field(rng, g.dim(), cfg_.extent, bumped, 1.0));
        return sample_components(g, comps);
    }

    std::vector<std::vector<double>> random_points(Rng& rng, int count) const {
        std::vector<std::vector<double>> pts;
        const int d = 2 * cfg_.n + 1;
        for (int i = 0; i < count; ++i) {
            std::vector<double> p(d);
            for (int a = 0; a < d; ++a) p[a] = rng.uniform(-cfg_.extent, cfg_.extent);
            pts.push_back(p);
        }
        return pts;
    }

  private:
    OracleConfig cfg_;

    template <class Fn>
    void refinement_study(CheckResult& c, Fn&& residual_at_level) const {
        for (int npts : cfg_.levels) {
            const BaseGrid g = grid(npts);
            c.spacings.push_back(g.lat.h[0]);
            c.residuals.push_back(residual_at_level(g));
        }
        detail::finish(c);
    }

    // --- individual checks -------------------------------------------------

    void check_self_adjoint(CheckResult& c) const {
        c.anchor = "rough sublaplacian is formally self-adjoint on compactly supported sections";
        Rng rng(cfg_.seed ^ 0x5e1fULL);
        const auto tgt = sphere_target();
        // several independent draws: the residual is a difference of two
        // converging integrals, so a single draw can cancel by luck
        const int trials = 3;
        std::vector<std::vector<TrigField>> fphi(trials), fV(trials), fW(trials);
        for (int t = 0; t < trials; ++t)
            for (int k = 0; k < cfg_.nu; ++k) {
                fphi[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
                fV[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
                fW[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
            }
        refinement_study(c, [&](const BaseGrid& g) {
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                const auto phi = sample_components(g, fphi[t]);
                const auto V = sample_components(g, fV[t]);
                const auto W = sample_components(g, fW[t]);
                const auto LV = rough_sublaplacian(g, tgt, phi, V);
                const auto LW = rough_sublaplacian(g, tgt, phi, W);
                worst = std::max(worst, std::abs(l2_inner(g, tgt, phi, LV, W) -
                                                 l2_inner(g, tgt, phi, V, LW)));
            }
            return worst;
        });
    }

    void check_nonpositive(CheckResult& c) const {
        c.anchor = "(Delta_b^phi V, V) <= 0 for compactly supported V";
        c.floor = 1e-6;
        c.exact_class = false;
        Rng rng(cfg_.seed ^ 0x0b97ULL);
        const auto tgt = sphere_target();
        std::vector<TrigField> fphi;
        for (int k = 0; k < cfg_.nu; ++k)
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
        std::vector<std::vector<TrigField>> sections(10);
        for (auto& s : sections)
            for (int k = 0; k < cfg_.nu; ++k)
                s.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
        refinement_study(c, [&](const BaseGrid& g) {
            const auto phi = sample_components(g, fphi);
            double worst = 0.0;
            for (const auto& s : sections) {
                const auto V = sample_components(g, s);
                const auto LV = rough_sublaplacian(g, tgt, phi, V);
                worst = std::max(worst, l2_inner(g, tgt, phi, LV, V));
            }
            return std::max(0.0, worst);
        });
        // verdict is the nonpositivity bound at the finest level
        c.pass = c.residuals.back() <= c.floor;
    }

    void check_dstar_d(CheckResult& c) const {
        c.anchor = "Delta_b^phi = -D*D, pointwise and as an L2 duality";
        Rng rng(cfg_.seed ^ 0xd5a4ULL);
        const auto tgt = sphere_target();
        const int trials = 3;
        std::vector<std::vector<TrigField>> fphi(trials), fV(trials), fW(trials);
        for (int t = 0; t < trials; ++t)
            for (int k = 0; k < cfg_.nu; ++k) {
                fphi[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
                fV[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
                fW[t].push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
            }
        refinement_study(c, [&](const BaseGrid& g) {
            const auto mask = interior_mask(g);
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                const auto phi = sample_components(g, fphi[t]);
                const auto V = sample_components(g, fV[t]);
                const auto W = sample_components(g, fW[t]);
                const auto DV = horizontal_derivative_D(g, tgt, phi, V);
                const auto DW = horizontal_derivative_D(g, tgt, phi, W);
                const auto LV = rough_sublaplacian(g, tgt, phi, V);
                auto dsd = d_star(g, tgt, phi, DV);
                for (std::size_t k = 0; k < dsd.data.size(); ++k) dsd.data[k] += LV.data[k];
                const double pointwise = detail::masked_max(dsd.data, mask, cfg_.nu);
                double pairing = 0.0;
                for (int a = 0; a < 2 * cfg_.n; ++a)
                    pairing += l2_inner(g, tgt, phi, DV[a], DW[a]);
                const double duality = std::abs(pairing + l2_inner(g, tgt, phi, LV, W));
                worst = std::max(worst, std::max(pointwise, duality));
            }
            return worst;
        });
    }

    void check_product_rule(CheckResult& c) const {
        c.anchor = "Delta_b(u^2) = 2u Delta_b u + 2 |grad_H u|^2";
        Rng rng(cfg_.seed ^ 0x9b0dULL);
        const auto f = random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0);
        refinement_study(c, [&](const BaseGrid& g) {
            const auto mask = interior_mask(g);
            const auto u = sample_scalar(g, f);
            std::vector<double> u2(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) u2[i] = u[i] * u[i];
            const auto lap_u2 = sublaplacian(g, u2);
            const auto lap_u = sublaplacian(g, u);
            const auto grad = horizontal_gradient(g, u);
            std::vector<double> resid(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) {
                double g2 = 0.0;
                for (int a = 0; a < grad.nframe; ++a) {
                    const double x = grad.coeff[i * grad.nframe + a];
                    g2 += x * x;
                }
                resid[i] = lap_u2[i] - 2.0 * u[i] * lap_u[i] - 2.0 * g2;
            }
            return detail::masked_max(resid, mask);
        });
    }

    void check_leibniz(CheckResult& c) const {
        c.anchor = "Delta_b^phi(gV) = g Delta_b^phi V + (Delta_b g) V + 2 D_{grad_H g} V";
        Rng rng(cfg_.seed ^ 0x1e1bULL);
        const auto tgt = sphere_target();
        const auto fg = random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0);
        std::vector<TrigField> fphi, fV;
        for (int k = 0; k < cfg_.nu; ++k) {
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
            fV.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0));
        }
        refinement_study(c, [&](const BaseGrid& g) {
            const auto mask = interior_mask(g);
            const auto phi = sample_components(g, fphi);
            const auto V = sample_components(g, fV);
            const auto scal = sample_scalar(g, fg);
            SectionField gV = V;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (int k = 0; k < cfg_.nu; ++k) gV.at(i, k) *= scal[i];
            const auto lhs = rough_sublaplacian(g, tgt, phi, gV);
            const auto LV = rough_sublaplacian(g, tgt, phi, V);
            const auto lap_g = sublaplacian(g, scal);
            const auto DV = horizontal_derivative_D(g, tgt, phi, V);
            const auto grad_g = horizontal_gradient(g, scal);
            std::vector<double> resid(lhs.data.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                for (int k = 0; k < cfg_.nu; ++k) {
                    double dgrad = 0.0;
                    for (int a = 0; a < grad_g.nframe; ++a)
                        dgrad += grad_g.coeff[i * grad_g.nframe + a] * DV[a].at(i, k);
                    resid[i * cfg_.nu + k] = lhs.at(i, k) - scal[i] * LV.at(i, k) -
                                             lap_g[i] * V.at(i, k) - 2.0 * dgrad;
                }
            return detail::masked_max(resid, mask, cfg_.nu);
        });
    }

    void check_symbol(CheckResult& c) const {
        c.anchor = "principal symbol: closed form vs defining computation; degeneracy on theta";
        Rng rng(cfg_.seed ^ 0x5b01ULL);
        const auto tgt = sphere_target();
        const int d = 2 * cfg_.n + 1;
        std::vector<TrigField> fphi;
        for (int k = 0; k < cfg_.nu; ++k)
            fphi.push_back(random_trig_field(rng, d, cfg_.extent, false, 0.25));
        std::vector<double> omega(d), v(cfg_.nu);
        for (int a = 0; a < d; ++a) omega[a] = rng.uniform(-1.0, 1.0);
        for (int k = 0; k < cfg_.nu; ++k) v[k] = rng.uniform(-1.0, 1.0);
        refinement_study(c, [&](const BaseGrid& g) {
            const auto phi = sample_components(g, fphi);
            const std::size_t center = g.size() / 2;
            const auto p = g.point(center);
            const auto closed = principal_symbol_closed(g.model, p, omega, v);
            const auto defined = principal_symbol_defining(g, tgt, phi, center, omega, v);
            double r = 0.0;
            for (int k = 0; k < cfg_.nu; ++k) r = std::max(r, std::abs(closed[k] - defined[k]));
            return r;
        });
        // degeneracy: at omega = theta_x the closed-form symbol vanishes
        const BaseGrid g = grid(cfg_.levels.front());
        Rng r2(cfg_.seed ^ 0x7e7aULL);
        const auto pts = random_points(r2, 10);
        double degen = 0.0;
        for (const auto& p : pts) {
            const auto th = g.model.lambda0(p.data());
            const auto sym = principal_symbol_closed(g.model, p, th, v);
            for (int k = 0; k < cfg_.nu; ++k) degen = std::max(degen, std::abs(sym[k]));
        }
        c.details["theta_degeneracy"] = degen;
        c.pass = c.pass && degen <= 1e-10;
    }

    void check_first_variation(CheckResult& c) const {
        c.anchor = "d/dt E_{2,b}(phi_t) = (V, BH_b(phi)) for chart-linear variations";
        c.threshold_order = 0.0;  // custom verdict below
        Rng rng(cfg_.seed ^ 0xf1b5ULL);
        const auto tgt = sphere_target();
        const int pairs = 20;
        // gentle shoulders: the residual is an integration-by-parts defect of a
        // fourth-order operator, dominated by taper derivatives
        const BumpProfile prof{0.15, 0.85, -1};
        std::vector<std::vector<TrigField>> fphis(pairs), fVs(pairs);
        for (int q = 0; q < pairs; ++q)
            for (int k = 0; k < cfg_.nu; ++k) {
                auto fp = random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 0.12);
                fp.prof = prof;
                auto fv = random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0);
                fv.prof = prof;
                fphis[q].push_back(fp);
                fVs[q].push_back(fv);
            }
        refinement_study(c, [&](const BaseGrid& g) {
            double worst = 0.0;
            for (int q = 0; q < pairs; ++q) {
                MapField phi = sample_components(g, fphis[q]);
                const SectionField V = sample_components(g, fVs[q]);
                const double ana = first_variation_analytic(g, tgt, phi, V);
                const double fd = first_variation_fd(g, tgt, phi, V, 1e-4);
                worst = std::max(worst, std::abs(ana - fd) / std::max(1.0, std::abs(ana)));
            }
            return worst;
        });
        c.floor = 1e-3;
        c.pass = c.residuals.back() <= 1e-3 && c.residuals.back() <= c.residuals.front();
    }

    void check_lee_identity(CheckResult& c) const {
        c.anchor = "wave operator of a lifted scalar projects to the sublaplacian";
        Rng rng(cfg_.seed ^ 0x1ee1ULL);
        const auto f = random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0);
        refinement_study(c, [&](const BaseGrid& g) {
            const LiftGrid lg(g, cfg_.fiber_points);
            const auto cache = build_fefferman_cache(g);
            return lee_identity_residual(lg, cache, sample_scalar(g, f), interior_mask(g));
        });
    }

    void check_tension_lift(CheckResult& c) const {
        c.anchor = "lifted tension field projects to the base tension field";
        Rng rng(cfg_.seed ^ 0x7e45ULL);
        const auto tgt = sphere_target();
        std::vector<TrigField> fphi;
        for (int k = 0; k < cfg_.nu; ++k)
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
        refinement_study(c, [&](const BaseGrid& g) {
            const LiftGrid lg(g, cfg_.fiber_points);
            const auto cache = build_fefferman_cache(g);
            return tension_lift_residual(lg, cache, tgt, sample_components(g, fphi),
                                         interior_mask(g));
        });
    }

    void check_energy_ratio(CheckResult& c) const {
        c.anchor = "lifted bienergy is 2 pi times the base bienergy";
        c.exact_class = true;
        c.floor = 1e-6;
        Rng rng(cfg_.seed ^ 0xea7cULL);
        const BaseGrid g = grid(cfg_.levels.front());
        const LiftGrid lg(g, cfg_.fiber_points);
        const auto cache = build_fefferman_cache(g);
        double worst = 0.0, worst_det = 0.0, last_ratio = 0.0;
        const TargetGeometry targets[2] = {sphere_target(), flat_target()};
        for (const auto& tgt : targets)
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<TrigField> fphi;
                for (int k = 0; k < cfg_.nu; ++k)
                    fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 0.3));
                const auto phi = sample_components(g, fphi);
                const auto res = energy_lift_ratio(lg, cache, tgt, phi, fiber_weight());
                const double rel = res.defined
                                       ? std::abs(res.ratio - 2.0 * std::numbers::pi) /
                                             (2.0 * std::numbers::pi)
                                       : 1.0;
                worst = std::max(worst, rel);
                worst_det = std::max(worst_det, res.det_residual);
                last_ratio = res.ratio;
            }
        c.spacings.push_back(g.lat.h[0]);
        c.residuals.push_back(std::max(worst, worst_det));
        c.details["ratio"] = last_ratio;
        c.details["det_residual"] = worst_det;
        detail::finish(c);
    }

    void check_inverse_identities(CheckResult& c) const {
        c.anchor = "contractions of the inverse lifted metric with the contact components";
        c.exact_class = true;
        Rng rng(cfg_.seed ^ 0x1417ULL);
        auto pts = random_points(rng, 100);
        const auto r = inverse_identities_check(model(), pts);
        c.spacings.push_back(1.0);
        c.residuals.push_back(std::max({r.unit, r.base_block, r.lambda_kernel, r.gamma_row,
                                        r.gamma_pairing}));
        c.details["unit"] = r.unit;
        c.details["base_block"] = r.base_block;
        c.details["lambda_kernel"] = r.lambda_kernel;
        c.details["gamma_row"] = r.gamma_row;
        c.details["gamma_pairing"] = r.gamma_pairing;
        detail::finish(c);
    }

    void check_reciprocal_levi(CheckResult& c) const {
        c.anchor = "inverse lifted metric reproduces the reciprocal Levi form";
        c.exact_class = true;
        Rng rng(cfg_.seed ^ 0x41e7ULL);
        auto pts = random_points(rng, 100);
        const auto r = reciprocal_levi_check(model(), pts);
        c.spacings.push_back(1.0);
        c.residuals.push_back(std::max(r.holo_antiholo, r.holo_holo));
        c.details["holo_antiholo"] = r.holo_antiholo;
        c.details["holo_holo"] = r.holo_holo;
        detail::finish(c);
    }

    void check_connection_lift(CheckResult& c) const {
        c.anchor = "Levi-Civita connection of the lifted metric on the frame lifts";
        c.exact_class = true;
        Rng rng(cfg_.seed ^ 0xc0117ULL);
        auto pts = random_points(rng, 10);
        c.spacings.push_back(1.0);
        c.residuals.push_back(connection_lift_check(model(), pts, 1e-4));
        detail::finish(c);
    }

    void check_rough_laplacian_lift(CheckResult& c) const {
        c.anchor = "lifted rough wave operator projects to the rough sublaplacian";
        Rng rng(cfg_.seed ^ 0x2019ULL);
        const auto tgt = sphere_target();
        std::vector<TrigField> fphi, fV;
        for (int k = 0; k < cfg_.nu; ++k) {
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
            fV.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0));
        }
        refinement_study(c, [&](const BaseGrid& g) {
            const LiftGrid lg(g, cfg_.fiber_points);
            return rough_laplacian_lift_residual(lg, tgt, sample_components(g, fphi),
                                                 sample_components(g, fV), interior_mask(g));
        });
        // the lengths of the timelike/spacelike fiber frame vectors, recorded
        // rather than assumed
        const HeisenbergModel m = model();
        const std::vector<double> origin(m.dim(), 0.0);
        const Eigen::MatrixXd F = fefferman_matrix(m, origin.data());
        const int D = m.dim() + 1;
        Eigen::VectorXd plus = Eigen::VectorXd::Zero(D), minus = Eigen::VectorXd::Zero(D);
        plus(m.t_axis()) = 1.0;
        minus(m.t_axis()) = 1.0;
        plus(D - 1) = 0.5 * (m.n + 2);
        minus(D - 1) = -0.5 * (m.n + 2);
        c.details["frame_norm_plus"] = plus.dot(F * plus);
        c.details["frame_norm_minus"] = minus.dot(F * minus);
    }

    void check_bh_lift(CheckResult& c) const {
        c.anchor = "lifted biharmonic operator projects to the base biharmonic operator";
        Rng rng(cfg_.seed ^ 0xb41fULL);
        const auto tgt = sphere_target();
        std::vector<TrigField> fphi;
        for (int k = 0; k < cfg_.nu; ++k)
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
        refinement_study(c, [&](const BaseGrid& g) {
            const LiftGrid lg(g, cfg_.fiber_points);
            const auto cache = build_fefferman_cache(g);
            return bh_lift_residual(lg, cache, tgt, sample_components(g, fphi),
                                    interior_mask(g));
        });
    }

    void check_green_lemma(CheckResult& c) const {
        c.anchor = "integral of a compactly supported horizontal divergence vanishes";
        Rng rng(cfg_.seed ^ 0x62ee7ULL);
        std::vector<TrigField> fY;
        for (int a = 0; a < 2 * cfg_.n; ++a)
            fY.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, true, 1.0));
        refinement_study(c, [&](const BaseGrid& g) {
            HorizontalField Y{2 * cfg_.n, std::vector<double>(g.size() * 2 * cfg_.n)};
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto p = g.point(i);
                for (int a = 0; a < 2 * cfg_.n; ++a) Y.coeff[i * 2 * cfg_.n + a] = fY[a](p);
            }
            return std::abs(integrate(g, divergence(g, Y)));
        });
    }

    void check_route_equivalence_rough(CheckResult& c) const {
        c.anchor = "frame definition vs expanded local formula of the rough sublaplacian";
        Rng rng(cfg_.seed ^ 0x6e57ULL);
        const auto tgt = sphere_target();
        const auto opts = expansion_options();
        std::vector<TrigField> fphi, fV;
        for (int k = 0; k < cfg_.nu; ++k) {
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
            fV.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 1.0));
        }
        refinement_study(c, [&](const BaseGrid& g) {
            const auto mask = interior_mask(g);
            const auto phi = sample_components(g, fphi);
            const auto V = sample_components(g, fV);
            const auto frame = rough_sublaplacian(g, tgt, phi, V);
            const auto local = rough_sublaplacian_expanded(g, tgt, phi, V, opts);
            std::vector<double> resid(frame.data.size());
            for (std::size_t k = 0; k < resid.size(); ++k)
                resid[k] = frame.data[k] - local.data[k];
            return detail::masked_max(resid, mask, cfg_.nu);
        });
    }

    void check_route_equivalence_tension(CheckResult& c) const {
        c.anchor = "local tension formula vs trace of the second fundamental form";
        Rng rng(cfg_.seed ^ 0x7e2517ULL);
        const auto tgt = sphere_target();
        std::vector<TrigField> fphi;
        for (int k = 0; k < cfg_.nu; ++k)
            fphi.push_back(random_trig_field(rng, 2 * cfg_.n + 1, cfg_.extent, false, 0.25));
        refinement_study(c, [&](const BaseGrid& g) {
            const auto mask = interior_mask(g);
            const auto phi = sample_components(g, fphi);
            const auto local = tension_field(g, tgt, phi);
            const auto trace = tension_field_trace_route(g, tgt, phi);
            std::vector<double> resid(local.data.size());
            for (std::size_t k = 0; k < resid.size(); ++k)
                resid[k] = local.data[k] - trace.data[k];
            return detail::masked_max(resid, mask, cfg_.nu);
        });
    }
};

}  // namespace subh
