#pragma once

// Uniform tensor-product lattices with finite-difference derivatives and
// product quadrature.  All higher-level grids (the Heisenberg box, the
// circle-bundle product grid) reduce to a Lattice for stencil work.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subh {

// Fornberg's algorithm: weights of the m-th derivative at z for nodes xs.
inline std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m) {
    const int nd = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nd + 1);
    for (int i = 0; i <= nd; ++i) w[i] = c[i][m];
    return w;
}

struct Lattice {
    std::vector<int> dims;
    std::vector<double> h;        // spacing per axis
    std::vector<char> periodic;   // nonzero = wrap-around axis
    int order = 4;                // stencil order (2, 4 or 6)

    int axes() const { return static_cast<int>(dims.size()); }

    std::size_t num_points() const {
        std::size_t np = 1;
        for (int d : dims) np *= static_cast<std::size_t>(d);
        return np;
    }

    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int a = axis + 1; a < axes(); ++a) s *= static_cast<std::size_t>(dims[a]);
        return s;
    }
};

// One row of first-derivative weights per line index, with one-sided rows in
// the boundary band of a non-periodic axis.
struct StencilRows {
    int width = 0;                   // points per row
    std::vector<int> first_offset;   // per index i: offset of row start relative to i
    std::vector<double> weights;     // rows, width each
};

inline StencilRows first_derivative_rows(int d, double h, int order, bool is_periodic) {
    if (order != 2 && order != 4 && order != 6) throw std::invalid_argument("stencil order must be 2, 4 or 6");
    const int w = order + 1;
    if (d < w) throw std::invalid_argument("grid too small for stencil");
    StencilRows rows;
    rows.width = w;
    rows.first_offset.resize(d);
    rows.weights.resize(static_cast<std::size_t>(d) * w);
    const int half = order / 2;
    for (int i = 0; i < d; ++i) {
        int start;
        if (is_periodic) {
            start = i - half;
        } else {
            start = std::min(std::max(i - half, 0), d - w);
        }
        rows.first_offset[i] = start - i;
        std::vector<double> xs(w);
        for (int k = 0; k < w; ++k) xs[k] = (start + k - i) * h;
        const auto wk = fd_weights(0.0, xs, 1);
        for (int k = 0; k < w; ++k) rows.weights[static_cast<std::size_t>(i) * w + k] = wk[k];
    }
    return rows;
}

// d/dx_axis of a lattice array with ncomp interleaved components per point.
inline std::vector<double> lattice_derivative(const Lattice& lat, const std::vector<double>& f,
                                              int axis, int ncomp = 1) {
    assert(axis >= 0 && axis < lat.axes());
    const std::size_t np = lat.num_points();
    assert(f.size() == np * static_cast<std::size_t>(ncomp));
    const int d = lat.dims[axis];
    const bool per = lat.periodic[axis] != 0;
    const StencilRows rows = first_derivative_rows(d, lat.h[axis], lat.order, per);
    const std::size_t str = lat.stride(axis) * static_cast<std::size_t>(ncomp);
    std::vector<double> out(f.size());
    const std::size_t total = f.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const int i = static_cast<int>((idx / str) % static_cast<std::size_t>(d));
        const double* wk = &rows.weights[static_cast<std::size_t>(i) * rows.width];
        const int off0 = rows.first_offset[i];
        double acc = 0.0;
        if (per) {
            for (int k = 0; k < rows.width; ++k) {
                int j = i + off0 + k;
                j = ((j % d) + d) % d;
                acc += wk[k] * f[idx + (static_cast<std::size_t>(j) - i) * str];
            }
        } else {
            const double* base = &f[idx] + static_cast<std::ptrdiff_t>(off0) * static_cast<std::ptrdiff_t>(str);
            for (int k = 0; k < rows.width; ++k)
                acc += wk[k] * base[static_cast<std::ptrdiff_t>(k) * static_cast<std::ptrdiff_t>(str)];
        }
        out[idx] = acc;
    }
    return out;
}

// Trapezoidal product-quadrature weight of flat point index (periodic axes
// get the uniform weight h).
inline std::vector<double> quadrature_weights(const Lattice& lat) {
    const std::size_t np = lat.num_points();
    std::vector<double> w(np, 1.0);
    for (int a = 0; a < lat.axes(); ++a) {
        const std::size_t str = lat.stride(a);
        const int d = lat.dims[a];
        for (std::size_t idx = 0; idx < np; ++idx) {
            const int i = static_cast<int>((idx / str) % static_cast<std::size_t>(d));
            double wa = lat.h[a];
            if (!lat.periodic[a] && (i == 0 || i == d - 1)) wa *= 0.5;
            w[idx] *= wa;
        }
    }
    return w;
}

}  // namespace subh
