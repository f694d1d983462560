#pragma once

// Energies E_{1,b}, E_{2,b}, first variation of the bienergy (analytic and
// finite-difference oracle), and the descent flow toward subelliptic
// biharmonic maps.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "operators.hpp"
#include "target.hpp"

namespace subh {

inline double energy_e1b(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi) {
    const int nu = tgt.nu, m = 2 * g.model.n;
    std::vector<std::vector<double>> dphi(m);
    for (int a = 1; a <= m; ++a) dphi[a - 1] = frame_derivative(g, phi.data, a, nu);
    std::vector<double> density(g.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto h = tgt.metric(&phi.data[p * nu]);
        double acc = 0.0;
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < nu; ++i)
                for (int j = 0; j < nu; ++j)
                    acc += h[i * nu + j] * dphi[a][p * nu + i] * dphi[a][p * nu + j];
        density[p] = 0.5 * acc;
    }
    return integrate(g, density);
}

inline double energy_e2b(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi) {
    const auto tau = tension_field(g, tgt, phi);
    return 0.5 * l2_inner(g, tgt, phi, tau, tau);
}

inline double first_variation_analytic(const BaseGrid& g, const TargetGeometry& tgt,
                                       const MapField& phi, const SectionField& V) {
    return l2_inner(g, tgt, phi, V, bh_operator(g, tgt, phi));
}

// central difference of E_{2,b} along the chart-linear variation phi + t V,
// Richardson-extrapolated once (steps delta and delta/2)
inline double first_variation_fd(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi,
                                 const SectionField& V, double delta = 1e-4) {
    auto central = [&](double d) {
        MapField plus = phi, minus = phi;
        for (std::size_t k = 0; k < phi.data.size(); ++k) {
            plus.data[k] += d * V.data[k];
            minus.data[k] -= d * V.data[k];
        }
        return (energy_e2b(g, tgt, plus) - energy_e2b(g, tgt, minus)) / (2.0 * d);
    };
    const double c1 = central(delta);
    const double c2 = central(delta / 2.0);
    return (4.0 * c2 - c1) / 3.0;
}

struct FlowConfig {
    double eta = 1e-3;
    int max_steps = 500;
    double stop_tolerance = 1e-8;  // on the L2 norm of BH_b
    BumpProfile variation_weight{};
    int energy_log_interval = 1;
    int max_backtracks = 30;
};

struct FlowSample {
    long step = 0;
    double e2b = 0.0, e1b = 0.0, tau_l2 = 0.0, bh_l2 = 0.0, max_chart = 0.0;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    bool converged = false;
    bool aborted = false;
    std::string abort_reason;

    std::string to_csv() const {
        std::ostringstream os;
        os << "step,e2b,e1b,tau_l2,bh_l2,max_chart_norm\n";
        for (const auto& s : samples)
            os << s.step << ',' << format_g17(s.e2b) << ',' << format_g17(s.e1b) << ','
               << format_g17(s.tau_l2) << ',' << format_g17(s.bh_l2) << ','
               << format_g17(s.max_chart) << '\n';
        return os.str();
    }
};

struct FlowResult {
    MapField phi;
    FlowTrace trace;
};

inline FlowResult flow_run(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi0,
                           const FlowConfig& cfg) {
    if (!(cfg.eta > 0.0) || !(cfg.stop_tolerance > 0.0))
        throw std::invalid_argument("flow needs positive step size and tolerance");
    const auto weight = make_bump(g, cfg.variation_weight);
    const int nu = phi0.ncomp;

    FlowResult res{phi0, {}};
    MapField& phi = res.phi;
    FlowTrace& tr = res.trace;

    auto finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    auto log_sample = [&](long step, double e2, const SectionField& tau,
                          const SectionField& bh) {
        FlowSample s;
        s.step = step;
        s.e2b = e2;
        s.e1b = energy_e1b(g, tgt, phi);
        s.tau_l2 = l2_norm(g, tgt, phi, tau);
        s.bh_l2 = l2_norm(g, tgt, phi, bh);
        s.max_chart = max_chart_norm(phi);
        tr.samples.push_back(s);
        return s;
    };

    double e2 = energy_e2b(g, tgt, phi);
    {
        const auto tau = tension_field(g, tgt, phi);
        const auto bh = bh_operator(g, tgt, phi);
        const auto s = log_sample(0, e2, tau, bh);
        if (s.bh_l2 < cfg.stop_tolerance) {
            tr.converged = true;
            return res;
        }
    }

    // step size memory: retry from twice the last accepted step, capped at
    // cfg.eta, so one bad step does not poison the whole run
    double eta_run = cfg.eta;
    for (long step = 1; step <= cfg.max_steps; ++step) {
        SectionField bh;
        try {
            bh = bh_operator(g, tgt, phi);
        } catch (const ChartOverflow& e) {
            tr.aborted = true;
            tr.abort_reason = std::string(e.what()) + " at step " + std::to_string(step);
            return res;
        }
        if (!finite(bh.data)) {
            tr.aborted = true;
            tr.abort_reason = "non-finite gradient at step " + std::to_string(step);
            return res;
        }

        double eta = eta_run;
        MapField trial = phi;
        double e2_trial = e2;
        bool accepted = false;
        for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
            for (std::size_t p = 0; p < g.size(); ++p)
                for (int c = 0; c < nu; ++c)
                    trial.at(p, c) = phi.at(p, c) - eta * weight[p] * bh.at(p, c);
            try {
                e2_trial = energy_e2b(g, tgt, trial);
            } catch (const ChartOverflow&) {
                eta *= 0.5;
                continue;
            }
            if (std::isfinite(e2_trial) && e2_trial <= e2) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            tr.aborted = true;
            tr.abort_reason = "backtracking failed at step " + std::to_string(step);
            return res;
        }
        eta_run = std::min(cfg.eta, 2.0 * eta);
        phi = trial;
        e2 = e2_trial;

        const bool log_now = (step % cfg.energy_log_interval == 0) || step == cfg.max_steps;
        const auto tau = tension_field(g, tgt, phi);
        const auto bh_new = bh_operator(g, tgt, phi);
        double bh_norm;
        if (log_now) {
            bh_norm = log_sample(step, e2, tau, bh_new).bh_l2;
        } else {
            bh_norm = l2_norm(g, tgt, phi, bh_new);
        }
        if (bh_norm < cfg.stop_tolerance) {
            if (!log_now) log_sample(step, e2, tau, bh_new);
            tr.converged = true;
            return res;
        }
    }
    return res;
}

}  // namespace subh
