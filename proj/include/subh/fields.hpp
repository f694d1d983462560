#pragma once

// Maps phi: M -> N and sections V of phi^{-1}TN, stored as interleaved
// component arrays over a BaseGrid.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "target.hpp"

namespace subh {

struct MapField {
    int ncomp = 0;
    std::vector<double> data;  // [point * ncomp + component]

    MapField() = default;
    MapField(const BaseGrid& g, int nc) : ncomp(nc), data(g.size() * nc, 0.0) {}

    double& at(std::size_t pt, int c) { return data[pt * ncomp + c]; }
    double at(std::size_t pt, int c) const { return data[pt * ncomp + c]; }

    std::vector<double> component(std::size_t npts, int c) const {
        std::vector<double> out(npts);
        for (std::size_t i = 0; i < npts; ++i) out[i] = data[i * ncomp + c];
        return out;
    }
};

using SectionField = MapField;

inline MapField sample_map(const BaseGrid& g, int ncomp,
                           const std::function<void(const std::vector<double>&, double*)>& fn) {
    MapField phi(g, ncomp);
    std::vector<double> val(ncomp);
    for (std::size_t i = 0; i < g.size(); ++i) {
        fn(g.point(i), val.data());
        for (int c = 0; c < ncomp; ++c) phi.at(i, c) = val[c];
    }
    return phi;
}

inline MapField constant_map(const BaseGrid& g, const std::vector<double>& y0) {
    MapField phi(g, static_cast<int>(y0.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int c = 0; c < phi.ncomp; ++c) phi.at(i, c) = y0[c];
    return phi;
}

// y0 + amp * bump * per-component oscillatory pattern; freq is the angular
// frequency in units of 1/extent per axis
inline MapField bump_perturbed_constant(const BaseGrid& g, const std::vector<double>& y0,
                                        double amp, const BumpProfile& prof = {},
                                        double freq = 0.5) {
    const auto b = make_bump(g, prof);
    MapField phi = constant_map(g, y0);
    const int d = g.dim();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        for (int c = 0; c < phi.ncomp; ++c) {
            double pattern = 1.0;
            for (int ax = 0; ax < d; ++ax)
                pattern *= std::cos(freq * p[ax] / g.extent + 0.3 * c + 0.2 * ax);
            phi.at(i, c) += amp * b[i] * pattern;
        }
    }
    return phi;
}

// phi^c = sum_ax A[c][ax] * p_ax (flat targets only in practice)
inline MapField coordinate_linear_map(const BaseGrid& g, int ncomp,
                                      const std::vector<std::vector<double>>& A) {
    MapField phi(g, ncomp);
    const int d = g.dim();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        for (int c = 0; c < ncomp; ++c) {
            double v = 0.0;
            for (int ax = 0; ax < d; ++ax) v += A[c][ax] * p[ax];
            phi.at(i, c) = v;
        }
    }
    return phi;
}

inline double max_chart_norm(const MapField& phi) {
    const std::size_t npts = phi.data.size() / phi.ncomp;
    double m = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double r2 = 0.0;
        for (int c = 0; c < phi.ncomp; ++c) r2 += phi.at(i, c) * phi.at(i, c);
        m = std::max(m, r2);
    }
    return std::sqrt(m);
}

// L2 pairing of sections along phi in the target metric h, contact volume
inline double l2_inner(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi,
                       const SectionField& V, const SectionField& W) {
    const int nu = tgt.nu;
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto h = tgt.metric(&phi.data[i * nu]);
        double acc = 0.0;
        for (int a = 0; a < nu; ++a)
            for (int b = 0; b < nu; ++b) acc += h[a * nu + b] * V.at(i, a) * W.at(i, b);
        integrand[i] = acc;
    }
    return integrate(g, integrand);
}

inline double l2_norm(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi,
                      const SectionField& V) {
    return std::sqrt(std::max(0.0, l2_inner(g, tgt, phi, V, V)));
}

// plain Euclidean L2 norm of a component array (diagnostics)
inline double l2_norm_euclidean(const BaseGrid& g, const std::vector<double>& f, int ncomp = 1) {
    std::vector<double> integrand(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int c = 0; c < ncomp; ++c) integrand[i] += f[i * ncomp + c] * f[i * ncomp + c];
    return std::sqrt(std::max(0.0, integrate(g, integrand)));
}

}  // namespace subh
