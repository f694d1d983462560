#pragma once

// Uniform tensor grid over a coordinate box in the Heisenberg model,
// plus compactly supported bump profiles used to localize test data.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "heisenberg.hpp"
#include "lattice.hpp"

namespace subh {

struct BaseGrid {
    HeisenbergModel model;
    Lattice lat;     // dim = 2n+1, axis order (x^1..x^n, y^1..y^n, t)
    double extent;   // box is [-extent, extent] per axis

    BaseGrid(const HeisenbergModel& m, int npts, double half_width, int fd_order = 4)
        : model(m), extent(half_width) {
        if (npts < 9 || npts % 2 == 0)
            throw std::invalid_argument("grid needs an odd point count >= 9");
        const int d = 2 * m.n + 1;
        lat.dims.assign(d, npts);
        lat.h.assign(d, 2.0 * half_width / (npts - 1));
        lat.periodic.assign(d, false);
        lat.order = fd_order;
    }

    std::size_t size() const { return lat.num_points(); }
    int dim() const { return 2 * model.n + 1; }

    std::vector<double> point(std::size_t flat) const {
        const int d = dim();
        std::vector<double> p(d);
        for (int ax = d - 1; ax >= 0; --ax) {
            const std::size_t id = flat % lat.dims[ax];
            flat /= lat.dims[ax];
            p[ax] = -extent + id * lat.h[ax];
        }
        return p;
    }
};

inline std::vector<double> coordinate_derivative(const BaseGrid& g, const std::vector<double>& f,
                                                 int axis, int ncomp = 1) {
    return lattice_derivative(g.lat, f, axis, ncomp);
}

// Xtilde_a f for a in 1..2n; a = 0 gives T f. Components interleaved when ncomp > 1.
inline std::vector<double> frame_derivative(const BaseGrid& g, const std::vector<double>& f,
                                            int a, int ncomp = 1) {
    const int n = g.model.n;
    const auto dt = coordinate_derivative(g, f, 2 * n, ncomp);
    if (a == 0) return dt;
    if (a < 1 || a > 2 * n) throw std::out_of_range("frame index");
    const bool first_block = a <= n;
    const int alpha = first_block ? a - 1 : a - n - 1;
    const int axis = first_block ? alpha : n + alpha;
    auto out = coordinate_derivative(g, f, axis, ncomp);
    const std::size_t npts = g.size();
    const double s = g.model.s;
    for (std::size_t i = 0; i < npts; ++i) {
        const auto p = g.point(i);
        const double coeff = first_block ? 2.0 * p[n + alpha] : -2.0 * p[alpha];
        for (int c = 0; c < ncomp; ++c) {
            const std::size_t k = i * ncomp + c;
            out[k] = s * (out[k] + coeff * dt[k]);
        }
    }
    return out;
}

// integral against the contact volume density c_n dx dy dt
inline double integrate(const BaseGrid& g, const std::vector<double>& f) {
    const auto w = quadrature_weights(g.lat);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
    return HeisenbergModel::volume_density(g.model.n) * acc;
}

// C^{k} monotone taper: s_k(0)=0, s_k(1)=1, flat to order k at both ends.
inline double smoothstep(double u, int k = 2) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    switch (k) {
        case 2: return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
        case 3: return u * u * u * u * (u * (u * (-20.0 * u + 70.0) - 84.0) + 35.0);
        case 5: {
            const double u2 = u * u, u3 = u2 * u;
            return u3 * u3 * (462.0 - 1980.0 * u + 3465.0 * u2 - 3080.0 * u3 + 1386.0 * u2 * u2 -
                              252.0 * u2 * u3);
        }
        case -1: {  // C^inf transition, flat to all orders at both ends
            const double a = std::exp(-1.0 / u);
            const double b = std::exp(-1.0 / (1.0 - u));
            return a / (a + b);
        }
        default: throw std::invalid_argument("unsupported smoothstep order");
    }
}

struct BumpProfile {
    double inner = 0.35;  // fraction of extent where bump == 1
    double outer = 0.80;  // fraction where bump reaches 0
    int smoothness = 2;   // smoothstep order of the shoulder
};

// points with every |coordinate| <= frac * extent; identities are asserted
// only here, away from one-sided boundary stencils
inline std::vector<bool> interior_mask(const BaseGrid& g, double frac = 0.35) {
    std::vector<bool> mask(g.size());
    const int d = g.dim();
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const auto p = g.point(i);
        bool in = true;
        for (int ax = 0; ax < d && in; ++ax) in = std::abs(p[ax]) <= frac * g.extent + 1e-12;
        mask[i] = in;
    }
    return mask;
}

inline double bump_1d(double u, const BumpProfile& prof) {
    const double r = std::abs(u);
    if (r <= prof.inner) return 1.0;
    if (r >= prof.outer) return 0.0;
    return 1.0 - smoothstep((r - prof.inner) / (prof.outer - prof.inner), prof.smoothness);
}

// separable bump: product of per-axis tapers in p/extent, 1 on the core box,
// 0 near the boundary
inline std::vector<double> make_bump(const BaseGrid& g, const BumpProfile& prof = {}) {
    std::vector<double> b(g.size());
    const int d = g.dim();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto p = g.point(i);
        double v = 1.0;
        for (int ax = 0; ax < d; ++ax) v *= bump_1d(p[ax] / g.extent, prof);
        b[i] = v;
    }
    return b;
}

}  // namespace subh
