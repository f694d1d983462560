#pragma once

// The Heisenberg group H_n as a strictly pseudoconvex CR model: contact form,
// orthonormal horizontal frame, Reeb field, Levi form, volume density and the
// frame-decomposition matrices lambda / mu.
//
// Coordinate order is fixed as (x^1..x^n, y^1..y^n, t).  The contact form is
//   theta = dt + 2 sum_a (x^a dy^a - y^a dx^a),   d theta = 4 sum_a dx^a ^ dy^a,
// and the printed left-invariant frame
//   X_a     = d/dx^a + 2 y^a d/dt,
//   X_{n+a} = d/dy^a - 2 x^a d/dt
// satisfies G_theta(X_a, X_a) = 4, so the orthonormal frame carries the
// normalization Xt_a = s X_a with s = 1/2 by default.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace subh {

struct HeisenbergModel {
    int n = 1;
    double s = 0.5;  // frame normalization: Xt_a = s X_a

    int dim() const { return 2 * n + 1; }
    int t_axis() const { return 2 * n; }

    // Coordinate components of the orthonormal frame vector Xt_a, a in 1..2n.
    std::vector<double> frame_vector(int a, const double* p) const {
        if (a < 1 || a > 2 * n) throw std::out_of_range("frame index out of range");
        std::vector<double> v(dim(), 0.0);
        if (a <= n) {
            const int alpha = a - 1;
            v[alpha] = s;
            v[t_axis()] = 2.0 * s * p[n + alpha];  // + 2 y^alpha d/dt
        } else {
            const int alpha = a - n - 1;
            v[n + alpha] = s;
            v[t_axis()] = -2.0 * s * p[alpha];     // - 2 x^alpha d/dt
        }
        return v;
    }

    std::vector<double> reeb() const {
        std::vector<double> v(dim(), 0.0);
        v[t_axis()] = 1.0;
        return v;
    }

    double theta(const double* p, const double* v) const {
        double val = v[t_axis()];
        for (int a = 0; a < n; ++a)
            val += 2.0 * (p[a] * v[n + a] - p[n + a] * v[a]);
        return val;
    }

    // d theta = 4 sum dx^a ^ dy^a (constant coefficients).
    double dtheta(const double* u, const double* v) const {
        double val = 0.0;
        for (int a = 0; a < n; ++a)
            val += 4.0 * (u[a] * v[n + a] - u[n + a] * v[a]);
        return val;
    }

    // J on coordinate components of a horizontal vector: J Xt_a = Xt_{n+a},
    // J Xt_{n+a} = -Xt_a.  Implemented through frame coefficients.
    std::vector<double> jay(const double* p, const double* u) const {
        std::vector<double> c = frame_coefficients(p, u);
        std::vector<double> jc(2 * n);
        for (int a = 0; a < n; ++a) {
            jc[n + a] = c[a];
            jc[a] = -c[n + a];
        }
        return horizontal_from_frame(p, jc.data());
    }

    // Expand a horizontal vector in the orthonormal frame.  Rejects input with
    // a Reeb component above tol.
    std::vector<double> frame_coefficients(const double* p, const double* u,
                                           double tol = 1e-10) const {
        if (std::fabs(theta(p, u)) > tol * (1.0 + norm_inf(u)))
            throw std::invalid_argument("vector is not horizontal");
        std::vector<double> c(2 * n);
        for (int a = 0; a < n; ++a) {
            c[a] = u[a] / s;
            c[n + a] = u[n + a] / s;
        }
        return c;
    }

    std::vector<double> horizontal_from_frame(const double* p, const double* coeff) const {
        std::vector<double> v(dim(), 0.0);
        for (int a = 1; a <= 2 * n; ++a) {
            const auto fa = frame_vector(a, p);
            for (int A = 0; A < dim(); ++A) v[A] += coeff[a - 1] * fa[A];
        }
        return v;
    }

    // Levi form G_theta(u, v) = d theta(u, J v) on horizontal vectors.
    double levi_form(const double* p, const double* u, const double* v) const {
        (void)frame_coefficients(p, u);  // horizontality check
        const auto jv = jay(p, v);
        return dtheta(u, jv.data());
    }

    // g_{alpha beta-bar} = G_theta(T_alpha, T_beta-bar) = 2 s^2 delta.
    double g_levi() const { return 2.0 * s * s; }

    // Frame order for the lambda-decomposition: (T, T_1..T_n, Tbar_1..Tbar_n),
    // with T_alpha = (Xt_alpha - i Xt_{n+alpha}) / 2.
    Eigen::MatrixXcd frame_matrix(const double* p) const {
        const int m = dim();
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);  // M(B, A) = (T_B)^A
        const auto T = reeb();
        for (int A = 0; A < m; ++A) M(0, A) = T[A];
        const std::complex<double> I(0.0, 1.0);
        for (int alpha = 0; alpha < n; ++alpha) {
            const auto X1 = frame_vector(alpha + 1, p);
            const auto X2 = frame_vector(n + alpha + 1, p);
            for (int A = 0; A < m; ++A) {
                M(1 + alpha, A) = 0.5 * (X1[A] - I * X2[A]);
                M(1 + n + alpha, A) = 0.5 * (X1[A] + I * X2[A]);
            }
        }
        return M;
    }

    // lambda with d/dx^A = lambda_A^B T_B; mu = lambda^{-1}.
    void frame_decomposition(const double* p, Eigen::MatrixXcd& lambda, Eigen::MatrixXcd& mu) const {
        const Eigen::MatrixXcd M = frame_matrix(p);
        mu = M.transpose();
        lambda = mu.inverse();
    }

    // theta(d/dx^A): the lambda^0_A column used by the Fefferman assembly.
    std::vector<double> lambda0(const double* p) const {
        std::vector<double> l0(dim());
        for (int a = 0; a < n; ++a) {
            l0[a] = -2.0 * p[n + a];
            l0[n + a] = 2.0 * p[a];
        }
        l0[t_axis()] = 1.0;
        return l0;
    }

    // Density c_n with theta ^ (d theta)^n = c_n dx^1..dx^n dy^1..dy^n dt,
    // obtained by symbolic wedge expansion of the constant-coefficient part.
    static double volume_density(int n) {
        if (n < 1) throw std::invalid_argument("CR dimension must be >= 1");
        // Forms as maps from strictly increasing index tuples to coefficients.
        using Form = std::map<std::vector<int>, double>;
        const int m = 2 * n + 1;
        auto wedge = [](const Form& a, const Form& b) {
            Form out;
            for (const auto& [ia, ca] : a)
                for (const auto& [ib, cb] : b) {
                    std::vector<int> merged = ia;
                    merged.insert(merged.end(), ib.begin(), ib.end());
                    // sign of the sort, zero on repeats
                    int sign = 1;
                    bool dup = false;
                    std::vector<int> srt = merged;
                    for (std::size_t i = 0; i + 1 < srt.size() && !dup; ++i)
                        for (std::size_t j = 0; j + 1 < srt.size() - i; ++j) {
                            if (srt[j] == srt[j + 1]) { dup = true; break; }
                            if (srt[j] > srt[j + 1]) { std::swap(srt[j], srt[j + 1]); sign = -sign; }
                        }
                    if (dup) continue;
                    out[srt] += sign * ca * cb;
                }
            return out;
        };
        // At the origin theta = dt and the x,y-dependent terms of theta drop out
        // of the top-degree coefficient at every point (they wedge to zero
        // against (d theta)^n); the expansion below keeps them anyway.
        const double x0 = 0.37, y0 = -0.61;  // generic sample point, cancellation is exact
        Form theta;
        theta[{m - 1}] = 1.0;
        for (int a = 0; a < n; ++a) {
            theta[{n + a}] += 2.0 * x0;
            theta[{a}] += -2.0 * y0;
        }
        Form dtheta;
        for (int a = 0; a < n; ++a) dtheta[{a, n + a}] = 4.0;
        Form acc = theta;
        for (int k = 0; k < n; ++k) acc = wedge(acc, dtheta);
        std::vector<int> top(m);
        for (int A = 0; A < m; ++A) top[A] = A;
        const auto it = acc.find(top);
        const double c = (it == acc.end()) ? 0.0 : it->second;
        return std::fabs(c);
    }

  private:
    double norm_inf(const double* u) const {
        double r = 0.0;
        for (int A = 0; A < dim(); ++A) r = std::max(r, std::fabs(u[A]));
        return r;
    }
};

}  // namespace subh
