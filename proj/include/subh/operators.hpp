#pragma once

// Subelliptic operator core on H_n: horizontal gradient, sublaplacian,
// pullback connection, second fundamental form, tension field, rough
// sublaplacian (frame definition and expanded local formula), D / D*,
// principal symbol, curvature trace, and BH_b.
//
// The Tanaka-Webster connection of the Heisenberg model is flat with
// nabla_{X_a} X_b = 0; those terms are kept as explicit zero hooks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"
#include "target.hpp"

namespace subh {

struct HorizontalField {
    int nframe = 0;                // 2n
    std::vector<double> coeff;     // [point * nframe + (a-1)]
};

// the connection coefficients nabla_{Xtilde_a} Xtilde_b on H_n (flat model)
inline double frame_connection_hook(int /*a*/, int /*b*/) { return 0.0; }

inline HorizontalField horizontal_gradient(const BaseGrid& g, const std::vector<double>& u) {
    const int m = 2 * g.model.n;
    HorizontalField Y{m, std::vector<double>(g.size() * m)};
    for (int a = 1; a <= m; ++a) {
        const auto du = frame_derivative(g, u, a);
        for (std::size_t i = 0; i < g.size(); ++i) Y.coeff[i * m + (a - 1)] = du[i];
    }
    return Y;
}

inline std::vector<double> sublaplacian(const BaseGrid& g, const std::vector<double>& u,
                                        int ncomp = 1) {
    const int m = 2 * g.model.n;
    std::vector<double> out(u.size(), 0.0);
    for (int a = 1; a <= m; ++a) {
        const auto dd = frame_derivative(g, frame_derivative(g, u, a, ncomp), a, ncomp);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += dd[k];
        // minus (nabla_{Xtilde_a} Xtilde_a) u, identically zero here
        (void)frame_connection_hook(a, a);
    }
    return out;
}

inline std::vector<double> bi_sublaplacian(const BaseGrid& g, const std::vector<double>& u,
                                           int ncomp = 1) {
    return sublaplacian(g, sublaplacian(g, u, ncomp), ncomp);
}

inline std::vector<double> divergence(const BaseGrid& g, const HorizontalField& Y) {
    std::vector<double> out(g.size(), 0.0);
    std::vector<double> comp(g.size());
    for (int a = 1; a <= Y.nframe; ++a) {
        for (std::size_t i = 0; i < g.size(); ++i) comp[i] = Y.coeff[i * Y.nframe + (a - 1)];
        const auto d = frame_derivative(g, comp, a);
        for (std::size_t i = 0; i < g.size(); ++i) out[i] += d[i];
    }
    return out;
}

// components of phi_* Xtilde_a, i.e. Xtilde_a(phi^i)
inline SectionField pushforward(const BaseGrid& g, const MapField& phi, int a) {
    SectionField out = phi;
    out.data = frame_derivative(g, phi.data, a, phi.ncomp);
    return out;
}

namespace detail {
// (phi^{-1}nabla)_X V from precomputed directional derivatives X(phi), X(V)
inline SectionField pullback_from_derivatives(const BaseGrid& g, const TargetGeometry& tgt,
                                              const MapField& phi, const std::vector<double>& dphi,
                                              const std::vector<double>& dV,
                                              const SectionField& V) {
    const int nu = tgt.nu;
    SectionField out(g, nu);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double* y = &phi.data[p * nu];
        const auto G = tgt.christoffel(y);
        for (int i = 0; i < nu; ++i) {
            double acc = dV[p * nu + i];
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k)
                    acc += dphi[p * nu + j] * V.at(p, k) * G[(i * nu + j) * nu + k];
            out.at(p, i) = acc;
        }
    }
    return out;
}
}  // namespace detail

inline SectionField pullback_connection_frame(const BaseGrid& g, const TargetGeometry& tgt,
                                              const MapField& phi, int a, const SectionField& V) {
    const auto dphi = frame_derivative(g, phi.data, a, phi.ncomp);
    const auto dV = frame_derivative(g, V.data, a, V.ncomp);
    return detail::pullback_from_derivatives(g, tgt, phi, dphi, dV, V);
}

inline SectionField pullback_connection_axis(const BaseGrid& g, const TargetGeometry& tgt,
                                             const MapField& phi, int axis,
                                             const SectionField& V) {
    const auto dphi = coordinate_derivative(g, phi.data, axis, phi.ncomp);
    const auto dV = coordinate_derivative(g, V.data, axis, V.ncomp);
    return detail::pullback_from_derivatives(g, tgt, phi, dphi, dV, V);
}

// beta_b(phi)(Xtilde_a, Xtilde_b) = (phi^{-1}nabla)_{Xtilde_a} phi_* Xtilde_b
// minus phi_*(nabla_{Xtilde_a} Xtilde_b), the latter a zero hook here
inline SectionField second_fundamental_form(const BaseGrid& g, const TargetGeometry& tgt,
                                            const MapField& phi, int a, int b) {
    auto out = pullback_connection_frame(g, tgt, phi, a, pushforward(g, phi, b));
    (void)frame_connection_hook(a, b);
    return out;
}

// local formula: tau^i = Delta_b phi^i + sum_a Xtilde_a phi^j Xtilde_a phi^k Gamma^i_{jk}
inline SectionField tension_field(const BaseGrid& g, const TargetGeometry& tgt,
                                  const MapField& phi) {
    const int nu = phi.ncomp, m = 2 * g.model.n;
    SectionField out(g, nu);
    out.data = sublaplacian(g, phi.data, nu);
    if (tgt.is_flat()) return out;
    std::vector<std::vector<double>> dphi(m);
    for (int a = 1; a <= m; ++a) dphi[a - 1] = frame_derivative(g, phi.data, a, nu);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto G = tgt.christoffel(&phi.data[p * nu]);
        for (int i = 0; i < nu; ++i) {
            double acc = 0.0;
            for (int a = 0; a < m; ++a)
                for (int j = 0; j < nu; ++j)
                    for (int k = 0; k < nu; ++k)
                        acc += dphi[a][p * nu + j] * dphi[a][p * nu + k] * G[(i * nu + j) * nu + k];
            out.at(p, i) += acc;
        }
    }
    return out;
}

// independent route: trace over the frame of the second fundamental form
inline SectionField tension_field_trace_route(const BaseGrid& g, const TargetGeometry& tgt,
                                              const MapField& phi) {
    const int m = 2 * g.model.n;
    SectionField out(g, phi.ncomp);
    for (int a = 1; a <= m; ++a) {
        const auto beta = second_fundamental_form(g, tgt, phi, a, a);
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += beta.data[k];
    }
    return out;
}

// frame definition: sum_a D_a D_a V (the nabla_{X_a}X_a correction is a zero hook)
inline SectionField rough_sublaplacian(const BaseGrid& g, const TargetGeometry& tgt,
                                       const MapField& phi, const SectionField& V) {
    const int m = 2 * g.model.n;
    SectionField out(g, V.ncomp);
    for (int a = 1; a <= m; ++a) {
        const auto DDV = pullback_connection_frame(g, tgt, phi, a,
                                                   pullback_connection_frame(g, tgt, phi, a, V));
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += DDV.data[k];
        (void)frame_connection_hook(a, a);
    }
    return out;
}

struct RoughExpansionOptions {
    // test-harness corruption hooks, both false in normal use
    bool drop_mixed_term = false;       // the first-order 2 Gamma Xphi XV term
    bool drop_gamma_laplacian = false;  // the Gamma^i_{jk} Delta_b phi^j zero-order piece
};

// the expanded second-order local formula for Delta_b^phi
inline SectionField rough_sublaplacian_expanded(const BaseGrid& g, const TargetGeometry& tgt,
                                                const MapField& phi, const SectionField& V,
                                                const RoughExpansionOptions& opt = {}) {
    const int nu = V.ncomp, m = 2 * g.model.n;
    SectionField out(g, nu);
    out.data = sublaplacian(g, V.data, nu);
    if (tgt.is_flat() && !opt.drop_mixed_term && !opt.drop_gamma_laplacian) return out;

    std::vector<std::vector<double>> dphi(m), dV(m);
    for (int a = 1; a <= m; ++a) {
        dphi[a - 1] = frame_derivative(g, phi.data, a, nu);
        dV[a - 1] = frame_derivative(g, V.data, a, nu);
    }
    const auto lap_phi = sublaplacian(g, phi.data, nu);

    for (std::size_t p = 0; p < g.size(); ++p) {
        const double* y = &phi.data[p * nu];
        const auto G = tgt.christoffel(y);
        const auto dG = tgt.christoffel_deriv(y);
        for (int i = 0; i < nu; ++i) {
            double acc = 0.0;
            if (!opt.drop_mixed_term)
                for (int a = 0; a < m; ++a)
                    for (int j = 0; j < nu; ++j)
                        for (int k = 0; k < nu; ++k)
                            acc += 2.0 * dphi[a][p * nu + j] * G[(i * nu + j) * nu + k] *
                                   dV[a][p * nu + k];
            for (int j = 0; j < nu; ++j)
                for (int k = 0; k < nu; ++k) {
                    double coeff = 0.0;
                    if (!opt.drop_gamma_laplacian)
                        coeff += G[(i * nu + j) * nu + k] * lap_phi[p * nu + j];
                    for (int a = 0; a < m; ++a)
                        for (int l = 0; l < nu; ++l) {
                            double bracket = dG[((i * nu + j) * nu + k) * nu + l];
                            for (int s = 0; s < nu; ++s)
                                bracket += G[(s * nu + k) * nu + l] * G[(i * nu + j) * nu + s];
                            coeff += dphi[a][p * nu + j] * dphi[a][p * nu + l] * bracket;
                        }
                    acc += coeff * V.at(p, k);
                }
            out.at(p, i) += acc;
        }
    }
    return out;
}

using SectionTuple = std::vector<SectionField>;

inline SectionTuple horizontal_derivative_D(const BaseGrid& g, const TargetGeometry& tgt,
                                            const MapField& phi, const SectionField& V) {
    const int m = 2 * g.model.n;
    SectionTuple out;
    out.reserve(m);
    for (int a = 1; a <= m; ++a) out.push_back(pullback_connection_frame(g, tgt, phi, a, V));
    return out;
}

inline SectionField d_star(const BaseGrid& g, const TargetGeometry& tgt, const MapField& phi,
                           const SectionTuple& theta) {
    const int m = 2 * g.model.n;
    if (static_cast<int>(theta.size()) != m) throw std::invalid_argument("D* arity mismatch");
    SectionField out(g, theta[0].ncomp);
    for (int a = 1; a <= m; ++a) {
        const auto d = pullback_connection_frame(g, tgt, phi, a, theta[a - 1]);
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] -= d.data[k];
        (void)frame_connection_hook(a, a);
    }
    return out;
}

// sigma_2(Delta_b^phi)_omega v = [omega(T)^2 - |omega|^2_{g_theta^*}] v
inline std::vector<double> principal_symbol_closed(const HeisenbergModel& model,
                                                   const std::vector<double>& p,
                                                   const std::vector<double>& omega,
                                                   const std::vector<double>& v) {
    const int m = 2 * model.n;
    double norm2 = 0.0;
    const double wT = omega[2 * model.n];  // omega(T), T = d/dt
    for (int a = 1; a <= m; ++a) {
        const auto X = model.frame_vector(a, p.data());
        double wX = 0.0;
        for (std::size_t A = 0; A < X.size(); ++A) wX += omega[A] * X[A];
        norm2 += wX * wX;
    }
    norm2 += wT * wT;
    bool all_zero = wT == 0.0 && norm2 == 0.0;
    if (all_zero) throw std::invalid_argument("zero covector");
    const double scale = wT * wT - norm2;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * v[i];
    return out;
}

// defining computation: -1/2 Delta_b^phi[(f - f(x))^2 V](x) with df = omega
inline std::vector<double> principal_symbol_defining(const BaseGrid& g, const TargetGeometry& tgt,
                                                     const MapField& phi, std::size_t x_index,
                                                     const std::vector<double>& omega,
                                                     const std::vector<double>& v) {
    double wsum = 0.0;
    for (double w : omega) wsum += std::abs(w);
    if (wsum == 0.0) throw std::invalid_argument("zero covector");
    const int nu = tgt.nu, d = g.dim();
    const auto x = g.point(x_index);
    SectionField W(g, nu);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto q = g.point(p);
        double f = 0.0;
        for (int A = 0; A < d; ++A) f += omega[A] * (q[A] - x[A]);
        for (int i = 0; i < nu; ++i) W.at(p, i) = f * f * v[i];
    }
    const auto L = rough_sublaplacian(g, tgt, phi, W);
    std::vector<double> out(nu);
    for (int i = 0; i < nu; ++i) out[i] = -0.5 * L.at(x_index, i);
    return out;
}

// sum_a R^h(W, phi_* Xtilde_a) phi_* Xtilde_a
inline SectionField curvature_trace_term(const BaseGrid& g, const TargetGeometry& tgt,
                                         const MapField& phi, const SectionField& W) {
    const int nu = phi.ncomp, m = 2 * g.model.n;
    SectionField out(g, nu);
    if (tgt.is_flat()) return out;
    std::vector<std::vector<double>> dphi(m);
    for (int a = 1; a <= m; ++a) dphi[a - 1] = frame_derivative(g, phi.data, a, nu);
    std::vector<double> u(nu), w(nu);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double* y = &phi.data[p * nu];
        const auto G = tgt.christoffel(y);
        const auto dG = tgt.christoffel_deriv(y);
        for (int i = 0; i < nu; ++i) u[i] = W.at(p, i);
        for (int a = 0; a < m; ++a) {
            for (int i = 0; i < nu; ++i) w[i] = dphi[a][p * nu + i];
            const auto R = tgt.curvature_from(G, dG, u.data(), w.data(), w.data());
            for (int i = 0; i < nu; ++i) out.at(p, i) += R[i];
        }
    }
    return out;
}

// BH_b(phi) = Delta_b^phi tau_b(phi) + curvature trace at tau_b(phi)
inline SectionField bh_operator(const BaseGrid& g, const TargetGeometry& tgt,
                                const MapField& phi) {
    const auto tau = tension_field(g, tgt, phi);
    auto out = rough_sublaplacian(g, tgt, phi, tau);
    const auto trace = curvature_trace_term(g, tgt, phi, tau);
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += trace.data[k];
    return out;
}

}  // namespace subh
