#pragma once

// Riemannian target (N, h) in a single chart: flat R^nu and the unit round
// sphere in the stereographic chart h_{jk} = 4 delta_{jk} / (1+|y|^2)^2.
// Curvature follows the printed component convention
//   (R^h)^m_{l k j} = dGamma^m_{kj}/dy^l - dGamma^m_{lj}/dy^k
//                     + Gamma^i_{kj} Gamma^m_{li} - Gamma^i_{lj} Gamma^m_{ki}
// contracted as (R(u,v)w)^m = (R^h)^m_{lkj} u^l v^k w^j.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace subh {

struct ChartOverflow : std::runtime_error {
    explicit ChartOverflow(double norm)
        : std::runtime_error("target chart overflow, |y| = " + std::to_string(norm)) {}
};

struct TargetGeometry {
    enum class Kind { Flat, RoundSphere };

    int nu = 2;
    Kind kind = Kind::Flat;
    double chart_bound = 1e3;
    double curvature_sign = 1.0;  // test harness hook, +1 in normal use

    static TargetGeometry flat(int nu) { return TargetGeometry{nu, Kind::Flat, 1e300, 1.0}; }
    static TargetGeometry sphere(int nu) { return TargetGeometry{nu, Kind::RoundSphere, 1e3, 1.0}; }

    bool is_flat() const { return kind == Kind::Flat; }

    void check_chart(const double* y) const {
        double r2 = 0.0;
        for (int i = 0; i < nu; ++i) r2 += y[i] * y[i];
        if (!(r2 < chart_bound * chart_bound)) throw ChartOverflow(std::sqrt(r2));
    }

    // h_{jk}(y), row-major nu x nu.
    std::vector<double> metric(const double* y) const {
        check_chart(y);
        std::vector<double> h(static_cast<std::size_t>(nu) * nu, 0.0);
        if (is_flat()) {
            for (int i = 0; i < nu; ++i) h[i * nu + i] = 1.0;
        } else {
            const double c = conformal(y);
            for (int i = 0; i < nu; ++i) h[i * nu + i] = c * c;
        }
        return h;
    }

    // Gamma^i_{jk}(y), index [i*nu*nu + j*nu + k], symmetric in (j,k).
    std::vector<double> christoffel(const double* y) const {
        check_chart(y);
        std::vector<double> g(static_cast<std::size_t>(nu) * nu * nu, 0.0);
        if (is_flat()) return g;
        std::vector<double> f(nu);
        log_conformal_grad(y, f.data());
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k)
                    g[(i * nu + j) * nu + k] =
                        (i == j ? f[k] : 0.0) + (i == k ? f[j] : 0.0) - (j == k ? f[i] : 0.0);
        return g;
    }

    // dGamma^i_{jk}/dy^l, index [((i*nu + j)*nu + k)*nu + l].
    std::vector<double> christoffel_deriv(const double* y) const {
        check_chart(y);
        std::vector<double> dg(static_cast<std::size_t>(nu) * nu * nu * nu, 0.0);
        if (is_flat()) return dg;
        std::vector<double> ff(static_cast<std::size_t>(nu) * nu);
        log_conformal_hess(y, ff.data());
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k)
                    for (int l = 0; l < nu; ++l)
                        dg[((i * nu + j) * nu + k) * nu + l] =
                            (i == j ? ff[k * nu + l] : 0.0) + (i == k ? ff[j * nu + l] : 0.0) -
                            (j == k ? ff[i * nu + l] : 0.0);
        return dg;
    }

    // R(u,v)w from the printed component formula.
    std::vector<double> curvature(const double* y, const double* u, const double* v,
                                  const double* w) const {
        const auto G = christoffel(y);
        const auto dG = christoffel_deriv(y);
        return curvature_from(G, dG, u, v, w);
    }

    std::vector<double> curvature_from(const std::vector<double>& G, const std::vector<double>& dG,
                                       const double* u, const double* v, const double* w) const {
        std::vector<double> out(nu, 0.0);
        for (int m = 0; m < nu; ++m) {
            double acc = 0.0;
            for (int l = 0; l < nu; ++l)
                for (int k = 0; k < nu; ++k)
                    for (int j = 0; j < nu; ++j) {
                        double R = dG[((m * nu + k) * nu + j) * nu + l] -
                                   dG[((m * nu + l) * nu + j) * nu + k];
                        for (int i = 0; i < nu; ++i)
                            R += G[(i * nu + k) * nu + j] * G[(m * nu + l) * nu + i] -
                                 G[(i * nu + l) * nu + j] * G[(m * nu + k) * nu + i];
                        acc += R * u[l] * v[k] * w[j];
                    }
            out[m] = curvature_sign * acc;
        }
        return out;
    }

    // --- finite-difference oracles (test support) -------------------------

    std::vector<double> christoffel_fd_oracle(const double* y, double step = 1e-4) const {
        std::vector<double> dh(static_cast<std::size_t>(nu) * nu * nu);  // d h_{jk} / dy^l
        std::vector<double> yp(y, y + nu);
        for (int l = 0; l < nu; ++l) {
            yp[l] = y[l] + step;
            const auto hp = metric(yp.data());
            yp[l] = y[l] - step;
            const auto hm = metric(yp.data());
            yp[l] = y[l];
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k)
                    dh[(l * nu + j) * nu + k] = (hp[j * nu + k] - hm[j * nu + k]) / (2.0 * step);
        }
        const auto h = metric(y);
        const auto hinv = invert_metric(h);
        std::vector<double> g(static_cast<std::size_t>(nu) * nu * nu, 0.0);
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k) {
                    double acc = 0.0;
                    for (int m = 0; m < nu; ++m)
                        acc += hinv[i * nu + m] * (dh[(j * nu + m) * nu + k] +
                                                   dh[(k * nu + m) * nu + j] -
                                                   dh[(m * nu + j) * nu + k]);
                    g[(i * nu + j) * nu + k] = 0.5 * acc;
                }
        return g;
    }

    std::vector<double> curvature_fd_oracle(const double* y, const double* u, const double* v,
                                            const double* w, double step = 1e-4) const {
        std::vector<double> dG(static_cast<std::size_t>(nu) * nu * nu * nu);
        std::vector<double> yp(y, y + nu);
        for (int l = 0; l < nu; ++l) {
            yp[l] = y[l] + step;
            const auto gp = christoffel(yp.data());
            yp[l] = y[l] - step;
            const auto gm = christoffel(yp.data());
            yp[l] = y[l];
            for (std::size_t q = 0; q < gp.size(); ++q)
                dG[q * nu + l] = (gp[q] - gm[q]) / (2.0 * step);
        }
        return curvature_from(christoffel(y), dG, u, v, w);
    }

  private:
    double conformal(const double* y) const {
        double r2 = 0.0;
        for (int i = 0; i < nu; ++i) r2 += y[i] * y[i];
        return 2.0 / (1.0 + r2);
    }

    void log_conformal_grad(const double* y, double* f) const {
        double r2 = 0.0;
        for (int i = 0; i < nu; ++i) r2 += y[i] * y[i];
        for (int i = 0; i < nu; ++i) f[i] = -2.0 * y[i] / (1.0 + r2);
    }

    void log_conformal_hess(const double* y, double* ff) const {
        double r2 = 0.0;
        for (int i = 0; i < nu; ++i) r2 += y[i] * y[i];
        const double d = 1.0 + r2;
        for (int i = 0; i < nu; ++i)
            for (int l = 0; l < nu; ++l)
                ff[i * nu + l] = -2.0 * (i == l ? 1.0 : 0.0) / d + 4.0 * y[i] * y[l] / (d * d);
    }

    std::vector<double> invert_metric(const std::vector<double>& h) const {
        // targets are conformally flat in chart: h = c I with c = h_{00}
        std::vector<double> inv(h.size(), 0.0);
        for (int i = 0; i < nu; ++i) inv[i * nu + i] = 1.0 / h[i * nu + i];
        return inv;
    }
};

}  // namespace subh
