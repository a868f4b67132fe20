#ifndef CRITEX_SHOOTING_HPP
#define CRITEX_SHOOTING_HPP

// Shooting solvers for the radial ODE problems: the hessian-family connecting
// orbit matched to its slow-decay amplitude at r = 1, and the ground state of
// the cubic-type field equation located by overshoot/undershoot bisection.
// Both produce dense numeric-grid profiles with quintic Hermite interpolation.

#include "critex/families.hpp"
#include "critex/profiles.hpp"
#include "critex/radial_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace critex {
namespace shooting {

// ===========================================================================
// embedded Runge-Kutta 5(4), Dormand-Prince coefficients
// ===========================================================================

struct ode_options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double h_init = 1e-6;
    double h_max = 0.01;   // also the dense-output node spacing cap
    double r_max = 1.0;
    std::size_t max_steps = 2000000;
};

using state2 = std::array<double, 2>;

struct ode_node {
    double r;
    state2 y;
    state2 dy;
};

enum class stop_reason { reached_end, event, step_underflow, step_limit };

struct ode_run {
    std::vector<ode_node> nodes;
    stop_reason reason = stop_reason::reached_end;
    double r_final = 0.0;
    state2 y_final{};
};

// Integrate y' = f(r, y) from (r0, y0) to opts.r_max, recording every
// accepted step.  `eventp` (optional) stops the run when it returns true at
// an accepted step.
template <class F, class E>
ode_run integrate(const F& f, double r0, state2 y0, const ode_options& opts,
                  const E& eventp) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    ode_run run;
    double r = r0;
    state2 y = y0;
    state2 k1 = f(r, y);
    run.nodes.push_back({r, y, k1});

    double h = std::min(opts.h_init, opts.h_max);
    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (r >= opts.r_max) break;
        h = std::min(h, opts.r_max - r);
        if (h < 1e-15 * std::max(1.0, std::abs(r))) {
            if (opts.r_max - r < 1e-12 * std::max(1.0, opts.r_max)) {
                r = opts.r_max;  // within roundoff of the endpoint
                break;
            }
            run.reason = stop_reason::step_underflow;
            break;
        }

        auto axpy = [&](auto... terms) {
            state2 out;
            for (int i = 0; i < 2; ++i) {
                double acc = y[i];
                ((acc += h * terms.first * terms.second[i]), ...);
                out[i] = acc;
            }
            return out;
        };
        using cw = std::pair<double, const state2&>;
        const state2 k2 = f(r + c2 * h, axpy(cw{a21, k1}));
        const state2 k3 = f(r + c3 * h, axpy(cw{a31, k1}, cw{a32, k2}));
        const state2 k4 = f(r + c4 * h, axpy(cw{a41, k1}, cw{a42, k2}, cw{a43, k3}));
        const state2 k5 =
            f(r + c5 * h, axpy(cw{a51, k1}, cw{a52, k2}, cw{a53, k3}, cw{a54, k4}));
        const state2 k6 = f(r + h, axpy(cw{a61, k1}, cw{a62, k2}, cw{a63, k3},
                                        cw{a64, k4}, cw{a65, k5}));
        const state2 y5 =
            axpy(cw{b1, k1}, cw{b3, k3}, cw{b4, k4}, cw{b5, k5}, cw{b6, k6});
        const state2 k7 = f(r + h, y5);

        double errnorm = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double scale =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double q = err / scale;
            errnorm += q * q;
        }
        errnorm = std::sqrt(0.5 * errnorm);

        if (errnorm <= 1.0 || h <= 1e-14 * std::max(1.0, std::abs(r))) {
            r += h;
            y = y5;
            k1 = k7;  // first-same-as-last
            run.nodes.push_back({r, y, k1});
            if (eventp(r, y)) {
                run.reason = stop_reason::event;
                run.r_final = r;
                run.y_final = y;
                return run;
            }
        }
        const double fac =
            (errnorm == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 5.0);
        h = std::min(h * fac, opts.h_max);
    }
    if (run.reason == stop_reason::reached_end && r < opts.r_max &&
        run.nodes.size() >= opts.max_steps)
        run.reason = stop_reason::step_limit;
    run.r_final = r;
    run.y_final = y;
    return run;
}

// ===========================================================================
// quintic Hermite dense output
// ===========================================================================

// Nodes carry (value, first, second derivative); the piecewise quintic is C^2
// and its own derivatives serve as the profile derivatives, so residual
// checks measure true interpolation quality rather than echoing the ODE.
struct hermite_grid {
    std::vector<double> r, y, yp, ypp;

    std::size_t segment(double x) const {
        const auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - r.begin());
        if (i == 0) return 0;
        if (i >= r.size()) return r.size() - 2;
        return i - 1;
    }

    // d = 0, 1, 2 selects the derivative order
    double eval(double x, int d) const {
        const std::size_t i = segment(x);
        const double h = r[i + 1] - r[i];
        const double t = (x - r[i]) / h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

        double H[6], c[6];
        if (d == 0) {
            H[0] = 1 - 10 * t3 + 15 * t4 - 6 * t5;
            H[1] = t - 6 * t3 + 8 * t4 - 3 * t5;
            H[2] = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
            H[3] = 10 * t3 - 15 * t4 + 6 * t5;
            H[4] = -4 * t3 + 7 * t4 - 3 * t5;
            H[5] = 0.5 * t3 - t4 + 0.5 * t5;
        } else if (d == 1) {
            H[0] = -30 * t2 + 60 * t3 - 30 * t4;
            H[1] = 1 - 18 * t2 + 32 * t3 - 15 * t4;
            H[2] = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
            H[3] = 30 * t2 - 60 * t3 + 30 * t4;
            H[4] = -12 * t2 + 28 * t3 - 15 * t4;
            H[5] = 1.5 * t2 - 4 * t3 + 2.5 * t4;
        } else {
            H[0] = -60 * t + 180 * t2 - 120 * t3;
            H[1] = -36 * t + 96 * t2 - 60 * t3;
            H[2] = 1 - 9 * t + 18 * t2 - 10 * t3;
            H[3] = 60 * t - 180 * t2 + 120 * t3;
            H[4] = -24 * t + 84 * t2 - 60 * t3;
            H[5] = 3 * t - 12 * t2 + 10 * t3;
        }
        c[0] = y[i];
        c[1] = yp[i] * h;
        c[2] = ypp[i] * h * h;
        c[3] = y[i + 1];
        c[4] = yp[i + 1] * h;
        c[5] = ypp[i + 1] * h * h;
        double acc = 0.0;
        for (int j = 0; j < 6; ++j) acc += c[j] * H[j];
        const double scale = (d == 0) ? 1.0 : (d == 1 ? 1.0 / h : 1.0 / (h * h));
        return acc * scale;
    }
};

// ===========================================================================
// hessian-family connecting orbit
// ===========================================================================

// Radial reduction with w = (f')^k r^{n-k}:
//   f' = (w r^{k-n})^{1/k},     w' = (k / binom(n-1,k-1)) r^{n-1} (-f)^q,
// started from the even series f = -A + (1/2)(k A^q/(n binom(n-1,k-1)))^{1/k} r^2.
struct khessian_traj {
    ode_run run;
    double A;
    double r_start;
    bool blew_through = false;  // f reached 0 before r_max
};

namespace detail {

inline double khessian_c2(int n, int k, double q, double A) {
    const double C1 = static_cast<double>(profiles::binomial(n - 1, k - 1));
    return 0.5 * std::pow(k * std::pow(A, q) / (n * C1), 1.0 / k);
}

} // namespace detail

inline khessian_traj khessian_integrate(int n, int k, double q, double A,
                                        const ode_options& base_opts) {
    if (!(A > 0.0)) throw std::domain_error("starting depth must be positive");
    {
        families::equation_family f;
        f.kind = families::family_kind::k_hessian;
        f.n = n;
        f.k = k;
        families::throw_if_invalid(f);
        if (!(q > rat_to_double(families::serrin_exponent(f))))
            throw std::domain_error(
                "connecting orbit requires q above the divergence threshold");
    }
    const double C1 = static_cast<double>(profiles::binomial(n - 1, k - 1));
    const double c2 = detail::khessian_c2(n, k, q, A);
    // start where the quadratic term is a negligible correction to -A
    const double r0 = std::min(0.5 * std::sqrt(A / c2) * 1e-3, 1e-3);

    khessian_traj out;
    out.A = A;
    out.r_start = r0;

    state2 y0{-A + c2 * r0 * r0, std::pow(2.0 * c2 * r0, k) * std::pow(r0, n - k)};
    auto rhs = [n, k, q, C1](double r, const state2& y) {
        const double w = std::max(y[1], 0.0);
        const double fp = std::pow(w * std::pow(r, k - n), 1.0 / k);
        const double mf = std::max(-y[0], 0.0);
        return state2{fp, (k / C1) * std::pow(r, n - 1) * std::pow(mf, q)};
    };
    auto event = [](double, const state2& y) { return y[0] >= 0.0; };

    ode_options opts = base_opts;
    opts.h_init = std::min(base_opts.h_init, 0.1 * r0);
    out.run = integrate(rhs, r0, y0, opts, event);
    out.blew_through = (out.run.reason == stop_reason::event);
    return out;
}

struct khessian_match {
    double A_star = 0.0;
    double target_gap = 0.0;           // |f_A(1) + C_A|
    bool bracketed = false;            // a sign change was found and bisected
    bool matched = false;              // target_gap below tolerance
    double glue_value_jump = 0.0;      // same as target_gap
    double glue_derivative_jump = 0.0; // |f'(1) - beta C_A|
    double amplitude = 0.0;            // C_A
    double beta = 0.0;                 // slow decay rate 2k/(q-k)
    double residual_max = 0.0;         // interior equation residual of the glue
    profiles::radial_profile profile;  // grid on [r0, 1] glued to the power tail
    std::vector<ode_node> trajectory;  // dense nodes of the final run
    int evaluations = 0;
};

namespace detail {

inline double khessian_end_value(int n, int k, double q, double A, double CA,
                                 const ode_options& opts, int& evals) {
    ++evals;
    const khessian_traj t = khessian_integrate(n, k, q, A, opts);
    if (t.blew_through || t.run.r_final < opts.r_max * (1.0 - 1e-9))
        return CA;  // ended above target
    return t.run.y_final[0] + CA;
}

} // namespace detail

inline khessian_match khessian_shoot_match(int n, int k, double q,
                                           double tolerance = 1e-10,
                                           const ode_options& user_opts = {}) {
    const profiles::radial_profile slow = profiles::hessian_slow(n, k, q);
    double CA = 0.0, beta = 0.0;
    for (const auto& kv : slow.params.values) {
        if (kv.first == "CA") CA = kv.second;
        if (kv.first == "beta") beta = kv.second;
    }

    ode_options opts = user_opts;
    opts.r_max = 1.0;
    khessian_match out;
    out.amplitude = CA;
    out.beta = beta;

    auto h_of = [&](double A) {
        return detail::khessian_end_value(n, k, q, A, CA, opts, out.evaluations);
    };

    // coarse geometric scan, then one refinement pass around the minimum if
    // no sign change shows up at the coarse level
    auto scan = [&](double lo, double hi, int m, std::vector<double>& As,
                    std::vector<double>& hs) {
        As.clear();
        hs.clear();
        for (int i = 0; i < m; ++i) {
            const double x = lo * std::pow(hi / lo, i / double(m - 1));
            As.push_back(x);
            hs.push_back(h_of(x));
        }
    };

    std::vector<double> As, hs;
    scan(1e-3 * CA, 1e3 * CA, 64, As, hs);

    auto find_bracket = [&](const std::vector<double>& A_, const std::vector<double>& h_,
                            double& lo, double& hi) {
        for (std::size_t i = 0; i + 1 < A_.size(); ++i)
            if (h_[i] > 0.0 && h_[i + 1] < 0.0) {
                lo = A_[i];
                hi = A_[i + 1];
                return true;
            }
        return false;
    };

    double blo = 0.0, bhi = 0.0;
    bool have = find_bracket(As, hs, blo, bhi);
    if (!have) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < hs.size(); ++i)
            if (std::abs(hs[i]) < std::abs(hs[best])) best = i;
        const double lo = As[best > 0 ? best - 1 : 0];
        const double hi = As[std::min(best + 1, As.size() - 1)];
        scan(lo, hi, 64, As, hs);
        have = find_bracket(As, hs, blo, bhi);
    }

    double A_star;
    if (have) {
        out.bracketed = true;
        double hlo = h_of(blo);
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(blo * bhi);
            const double hm = h_of(mid);
            if (std::abs(hm) < 0.25 * tolerance || (bhi - blo) < 1e-15 * mid) break;
            if ((hm > 0.0) == (hlo > 0.0)) {
                blo = mid;
                hlo = hm;
            } else {
                bhi = mid;
            }
        }
        A_star = std::sqrt(blo * bhi);
    } else {
        // no sign change: settle for the best |h| by golden-section search
        std::size_t best = 0;
        for (std::size_t i = 1; i < hs.size(); ++i)
            if (std::abs(hs[i]) < std::abs(hs[best])) best = i;
        double a = As[best > 0 ? best - 1 : 0];
        double b = As[std::min(best + 1, As.size() - 1)];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = std::abs(h_of(x1)), f2 = std::abs(h_of(x2));
        for (int it = 0; it < 120 && (b - a) > 1e-14 * b; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = std::abs(h_of(x1));
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = std::abs(h_of(x2));
            }
        }
        A_star = 0.5 * (a + b);
    }

    // final dense run and glued profile; polish the root against the dense
    // discretization first so the reported gap refers to the same solution
    ode_options fine = opts;
    fine.h_max = 0.002;
    fine.rel_tol = std::min(opts.rel_tol, 1e-11);
    fine.abs_tol = std::min(opts.abs_tol, 1e-15);
    if (have) {
        auto h_fine = [&](double A) {
            return detail::khessian_end_value(n, k, q, A, CA, fine, out.evaluations);
        };
        double span = 1e-8;
        double plo = A_star * (1.0 - span), phi = A_star * (1.0 + span);
        double hplo = h_fine(plo), hphi = h_fine(phi);
        while ((hplo > 0.0) == (hphi > 0.0) && span < 2e-3) {
            span *= 8.0;
            plo = A_star * (1.0 - span);
            phi = A_star * (1.0 + span);
            hplo = h_fine(plo);
            hphi = h_fine(phi);
        }
        if ((hplo > 0.0) != (hphi > 0.0)) {
            for (int it = 0; it < 200; ++it) {
                const double mid = std::sqrt(plo * phi);
                const double hm = h_fine(mid);
                if (std::abs(hm) < 0.25 * tolerance || (phi - plo) < 1e-15 * mid) break;
                if ((hm > 0.0) == (hplo > 0.0)) {
                    plo = mid;
                    hplo = hm;
                } else {
                    phi = mid;
                }
            }
            A_star = std::sqrt(plo * phi);
        }
    }
    const khessian_traj traj = khessian_integrate(n, k, q, A_star, fine);
    const double f1v = traj.run.y_final[0];
    out.A_star = A_star;
    out.target_gap = std::abs(f1v + CA);
    out.matched = have && out.target_gap <= tolerance;
    out.glue_value_jump = out.target_gap;

    // Two interpolation grids: one for f and one for f' in its own right.
    // Taking d/dr of the value interpolant would amplify the integrator's
    // per-node noise by 1/h^2 in the second derivative; interpolating f'
    // from its nodal values (with f'' and f''' closed-form from the state)
    // keeps the residual of the glued profile at the integrator's accuracy.
    const double C1 = static_cast<double>(profiles::binomial(n - 1, k - 1));
    auto grid = std::make_shared<hermite_grid>();
    auto dgrid = std::make_shared<hermite_grid>();
    for (const auto& nd : traj.run.nodes) {
        const double r = nd.r;
        const double fp = nd.dy[0];
        const double w = std::max(nd.y[1], 1e-300);
        const double mf = std::max(-nd.y[0], 0.0);
        // f'' and f''' from differentiating f' = (w r^{k-n})^{1/k}
        const double wp = (k / C1) * std::pow(r, n - 1) * std::pow(mf, q);
        const double g = wp / (k * w) + (k - n) / (double(k) * r);
        const double fpp = fp * g;
        const double wpp = (k / C1) * std::pow(r, n - 2) *
                           ((n - 1) * std::pow(mf, q) - q * r * std::pow(mf, q - 1) * fp);
        const double gp =
            wpp / (k * w) - wp * wp / (k * w * w) + (n - k) / (double(k) * r * r);
        const double fppp = fpp * g + fp * gp;
        grid->r.push_back(r);
        grid->y.push_back(nd.y[0]);
        grid->yp.push_back(fp);
        grid->ypp.push_back(fpp);
        dgrid->r.push_back(r);
        dgrid->y.push_back(fp);
        dgrid->yp.push_back(fpp);
        dgrid->ypp.push_back(fppp);
    }
    out.glue_derivative_jump = std::abs(grid->yp.back() - beta * CA);

    const double r0 = traj.r_start;
    const double A = A_star;
    const double c2 = detail::khessian_c2(n, k, q, A);
    profiles::radial_profile prof;
    prof.value = [grid, r0, A, c2, CA, beta](double r) {
        if (r < r0) return -A + c2 * r * r;
        if (r <= 1.0) return grid->eval(r, 0);
        return -CA * std::pow(r, -beta);
    };
    prof.deriv = [dgrid, r0, c2, CA, beta](double r) {
        if (r < r0) return 2.0 * c2 * r;
        if (r <= 1.0) return dgrid->eval(r, 0);
        return CA * beta * std::pow(r, -beta - 1.0);
    };
    prof.deriv2 = [dgrid, r0, c2, CA, beta](double r) {
        if (r < r0) return 2.0 * c2;
        if (r <= 1.0) return dgrid->eval(r, 1);
        return -CA * beta * (beta + 1.0) * std::pow(r, -beta - 2.0);
    };
    prof.sign = profiles::sign_class::negative;
    prof.decay = profiles::decay_class::algebraic;
    prof.decay_power = beta;
    prof.params.kind = "khessian-shoot";
    prof.params.set("n", n);
    prof.params.set("k", k);
    prof.params.set("q", q);
    prof.params.set("A", A_star);

    // interior equation residual of the glued profile, sampled on a log grid
    {
        families::equation_family fam;
        fam.kind = families::family_kind::k_hessian;
        fam.n = n;
        fam.k = k;
        const double lo = 1.5 * r0, hi = 0.999;
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            const double rr = lo * std::pow(hi / lo, i / 299.0);
            worst = std::max(worst, std::abs(radial_ops::residual(fam, prof, q, rr)));
        }
        out.residual_max = worst;
    }

    out.profile = std::move(prof);
    out.trajectory = traj.run.nodes;
    return out;
}

// Continue the matched orbit past the matching radius and fit the measured
// decay power of -f over [window_lo, window_hi] from the raw trajectory.
inline double khessian_decay_probe(int n, int k, double q, double A, double window_lo,
                                   double window_hi, const ode_options& base = {}) {
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw std::domain_error("decay probe needs 0 < window_lo < window_hi");
    ode_options opts = base;
    opts.r_max = window_hi;
    opts.h_max = std::max(base.h_max, window_hi / 4000.0);
    const khessian_traj t = khessian_integrate(n, k, q, A, opts);
    // The accepted nodes are near-uniform in r, which in log r piles almost
    // all of them into the last decade of the window.  Bin uniformly in
    // log r first so every scale carries the same weight in the fit.
    constexpr int bins = 96;
    const double l0 = std::log(window_lo), l1 = std::log(window_hi);
    std::array<double, bins> bx{}, by{};
    std::array<int, bins> bc{};
    for (const auto& nd : t.run.nodes) {
        if (nd.r < window_lo || nd.r > window_hi || nd.y[0] >= 0.0) continue;
        const double x = std::log(nd.r);
        int b = static_cast<int>((x - l0) / (l1 - l0) * bins);
        b = std::clamp(b, 0, bins - 1);
        bx[b] += x;
        by[b] += std::log(-nd.y[0]);
        ++bc[b];
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int b = 0; b < bins; ++b) {
        if (!bc[b]) continue;
        const double x = bx[b] / bc[b], yv = by[b] / bc[b];
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
        ++m;
    }
    if (m < 8) throw std::runtime_error("decay probe: orbit left the window too early");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

// ===========================================================================
// ground state of  -u'' - (n-1)u'/r + u = u^q
// ===========================================================================

struct schrodinger_result {
    double u0 = 0.0;
    bool converged = false;
    int bisections = 0;
    double tail_radius = 0.0;
    double tail_coeff = 0.0;
    profiles::radial_profile profile;
    std::vector<ode_node> trajectory;  // dense nodes up to the tail radius
};

namespace detail {

enum class shot { low, high, undecided };

template <class RHS>
shot classify_shot(const RHS& rhs, double r0, const state2& y0, double r_end,
                   const ode_options& base) {
    ode_options opts = base;
    opts.r_max = r_end;
    opts.h_max = 0.05;
    shot verdict = shot::undecided;
    auto event = [&](double, const state2& y) {
        if (y[0] <= 0.0) {
            verdict = shot::high;  // crossed zero: started too deep
            return true;
        }
        if (y[1] >= 0.0 && y[0] > 0.0) {
            verdict = shot::low;  // turned back up: not deep enough
            return true;
        }
        return false;
    };
    integrate(rhs, r0, y0, opts, event);
    return verdict;
}

} // namespace detail

inline schrodinger_result schrodinger_ground_state(int n, double q,
                                                   const ode_options& user_opts = {}) {
    if (n < 3) throw std::domain_error("ground state requires n >= 3");
    if (!(q > 1.0)) throw std::domain_error("ground state requires q > 1");
    if (!(q < (n + 2.0) / (n - 2.0)))
        throw std::domain_error("ground state requires q below the critical exponent");

    auto rhs = [n, q](double r, const state2& y) {
        const double u = y[0];
        const double forcing = std::pow(std::max(u, 0.0), q);
        return state2{y[1], -(n - 1) * y[1] / r + u - forcing};
    };
    const double r0 = 1e-4;
    auto init = [&](double a) {
        const double curv = (a - std::pow(a, q)) / n;  // u''(0)
        return state2{a + 0.5 * curv * r0 * r0, curv * r0};
    };

    const double r_end = 50.0;
    schrodinger_result out;

    // bracket: small amplitudes turn up, large ones cross zero
    double lo = 1.0 + 1e-6, hi = 2.0;
    while (detail::classify_shot(rhs, r0, init(hi), r_end, user_opts) ==
               detail::shot::low &&
           hi < 1e6)
        hi *= 2.0;
    if (hi >= 1e6) return out;  // no crossing found: report non-convergence

    int iters = 0;
    while (hi - lo > 1e-13 * hi && iters < 200) {
        const double mid = 0.5 * (lo + hi);
        const auto v = detail::classify_shot(rhs, r0, init(mid), r_end, user_opts);
        if (v == detail::shot::undecided) break;
        (v == detail::shot::low ? lo : hi) = mid;
        ++iters;
    }
    const double a = 0.5 * (lo + hi);
    out.u0 = a;
    out.bisections = iters;

    // dense record of the converged run, truncated where the tail takes over
    ode_options fine = user_opts;
    fine.r_max = r_end;
    fine.h_max = 0.02;
    auto event = [](double, const state2& y) { return y[0] <= 1e-7 || (y[1] > 0.0 && y[0] > 1e-4); };
    const ode_run run = integrate(rhs, r0, init(a), fine, event);

    // cut the grid at the last node with u still above the matching level and
    // decreasing
    const double u_match = 1e-5;
    std::size_t cut = run.nodes.size();
    for (std::size_t i = 0; i < run.nodes.size(); ++i) {
        if (run.nodes[i].y[0] <= u_match && run.nodes[i].y[1] < 0.0) {
            cut = i + 1;
            break;
        }
    }
    if (cut == run.nodes.size() || run.nodes[cut - 1].y[0] > 10 * u_match)
        return out;  // separatrix lost before reaching the matching level

    auto grid = std::make_shared<hermite_grid>();
    for (std::size_t i = 0; i < cut; ++i) {
        const auto& nd = run.nodes[i];
        grid->r.push_back(nd.r);
        grid->y.push_back(nd.y[0]);
        grid->yp.push_back(nd.y[1]);
        const double u = nd.y[0];
        grid->ypp.push_back(-(n - 1) * nd.y[1] / nd.r + u - std::pow(std::max(u, 0.0), q));
    }

    const double Rm = grid->r.back();
    const double uRm = grid->y.back();
    const double half = 0.5 * (n - 1);
    const double c = uRm * std::pow(Rm, half) * std::exp(Rm);
    out.tail_radius = Rm;
    out.tail_coeff = c;
    out.converged = true;
    out.trajectory.assign(run.nodes.begin(), run.nodes.begin() + cut);

    const double curv0 = (a - std::pow(a, q)) / n;
    profiles::radial_profile prof;
    prof.value = [grid, r0, a, curv0, c, half, Rm](double r) {
        if (r < r0) return a + 0.5 * curv0 * r * r;
        if (r <= Rm) return grid->eval(r, 0);
        return c * std::pow(r, -half) * std::exp(-r);
    };
    prof.deriv = [grid, r0, curv0, c, half, Rm](double r) {
        if (r < r0) return curv0 * r;
        if (r <= Rm) return grid->eval(r, 1);
        return -c * std::pow(r, -half) * std::exp(-r) * (1.0 + half / r);
    };
    prof.deriv2 = [grid, r0, curv0, c, half, Rm](double r) {
        if (r < r0) return curv0;
        if (r <= Rm) return grid->eval(r, 2);
        const double base = c * std::pow(r, -half) * std::exp(-r);
        return base * (1.0 + 2.0 * half / r + half * (half + 1.0) / (r * r));
    };
    prof.sign = profiles::sign_class::positive;
    prof.decay = profiles::decay_class::exponential;
    prof.params.kind = "schrodinger-ground";
    prof.params.set("n", n);
    prof.params.set("q", q);
    prof.params.set("u0", a);
    out.profile = std::move(prof);
    return out;
}

// ===========================================================================
// decay-rate fit
// ===========================================================================

// Least-squares decay measurement on [r_lo, r_hi].  Algebraic decay fits the
// slope of log|u| against log r.  Exponential decay fits |u| ~ r^{-p} e^{-s r}
// with the power prefactor p as a free regressor, so a slowly varying
// prefactor -- every localized ground state carries one -- cannot bias the
// reported rate s.
inline double decay_rate_estimate(const std::function<double(double)>& u, double r_lo,
                                  double r_hi, profiles::decay_class kind,
                                  int points = 64) {
    if (!(r_hi > r_lo && r_lo > 0.0))
        throw std::domain_error("decay fit needs 0 < r_lo < r_hi");
    const bool alg = (kind == profiles::decay_class::algebraic);
    std::vector<double> a1(points), a2(points), ay(points);
    double m1 = 0, m2 = 0, my = 0;
    for (int i = 0; i < points; ++i) {
        const double f = i / double(points - 1);
        const double r = alg ? r_lo * std::pow(r_hi / r_lo, f) : r_lo + f * (r_hi - r_lo);
        const double v = std::abs(u(r));
        if (!(v > 0.0)) throw std::domain_error("decay fit hit a zero of the profile");
        a1[i] = alg ? std::log(r) : r;
        a2[i] = alg ? 0.0 : std::log(r);
        ay[i] = std::log(v);
        m1 += a1[i];
        m2 += a2[i];
        my += ay[i];
    }
    m1 /= points;
    m2 /= points;
    my /= points;
    double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
    for (int i = 0; i < points; ++i) {
        const double d1 = a1[i] - m1, d2 = a2[i] - m2, dy = ay[i] - my;
        s11 += d1 * d1;
        s12 += d1 * d2;
        s22 += d2 * d2;
        s1y += d1 * dy;
        s2y += d2 * dy;
    }
    if (alg) return -s1y / s11;
    const double det = s11 * s22 - s12 * s12;
    return -(s22 * s1y - s12 * s2y) / det;
}

} // namespace shooting
} // namespace critex

#endif // CRITEX_SHOOTING_HPP
