#ifndef CRITEX_QUADRATURE_HPP
#define CRITEX_QUADRATURE_HPP

// Adaptive Gauss-Kronrod 15(7) quadrature with radial-integral conveniences:
// two-piece split for weighted integrals over [0, inf), tail substitutions for
// algebraic and exponential decay, and a divergence detector that separates
// "keeps growing" from "converges too slowly".

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace critex {
namespace quadrature {

struct quadrature_spec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_nodes = 20000;
};

struct quadrature_result {
    double value = 0.0;
    double error_estimate = 0.0;
    int nodes_used = 0;
    bool converged = false;
};

struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class tail_kind { algebraic, exponential };

namespace detail {

// Kronrod-15 abscissae on [-1,1] (positive half; last entry is the centre).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Gauss-7 weights for abscissae xgk[1], xgk[3], xgk[5], centre.
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct panel {
    double a, b;
    double value, error;
    int depth;
};

template <class F>
panel gk15(const F& f, double a, double b, int depth) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(centr);
    double resk = wgk[7] * fc;
    double resabs = std::abs(resk);
    double resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * xgk[j];
        fv1[j] = f(centr - dx);
        fv2[j] = f(centr + dx);
        const double sum = fv1[j] + fv2[j];
        resk += wgk[j] * sum;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    for (int i = 0; i < 3; ++i) resg += wg[i] * (fv1[2 * i + 1] + fv2[2 * i + 1]);

    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    panel p;
    p.a = a;
    p.b = b;
    p.depth = depth;
    p.value = resk * hlgth;
    resasc *= std::abs(hlgth);
    resabs *= std::abs(hlgth);
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(err, eps50 * resabs);
    p.error = err;
    return p;
}

// Decide, after the node budget ran out, whether the partial sums look like a
// genuine divergence (increments that do not shrink) rather than slow
// convergence (increments shrinking geometrically).
inline bool looks_divergent(const std::vector<double>& totals, double tol_target) {
    const std::size_t k = 12;
    if (totals.size() < k + 1) return false;
    const std::size_t start = totals.size() - (k + 1);
    double prev_inc = 0.0;
    int same_sign = 0;
    std::vector<double> ratios;
    for (std::size_t i = start; i + 1 < totals.size(); ++i) {
        const double inc = totals[i + 1] - totals[i];
        if (inc == 0.0) return false;
        if (i > start) {
            if ((inc > 0) != (prev_inc > 0)) return false;
            ratios.push_back(std::abs(inc / prev_inc));
        }
        prev_inc = inc;
        ++same_sign;
    }
    const double swing = std::abs(totals.back() - totals[start]);
    if (swing <= 100.0 * tol_target) return false;
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    const double med = ratios[ratios.size() / 2];
    return med >= 0.999;
}

template <class F>
quadrature_result adaptive(const F& f, double a, double b, const quadrature_spec& spec) {
    quadrature_result out;
    std::vector<panel> panels;
    panels.push_back(gk15(f, a, b, 0));
    out.nodes_used = 15;

    std::vector<double> totals;
    totals.reserve(256);

    for (;;) {
        double total = 0.0, toterr = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            toterr += p.error;
        }
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (std::isfinite(total) && toterr <= target) {
            out.value = total;
            out.error_estimate = toterr;
            out.converged = true;
            return out;
        }
        if (!std::isfinite(total))
            throw divergence_error("integrand overflows at the sample points: diverging");
        if (std::abs(total) > 1e150)
            throw divergence_error("integral exceeds overflow guard: diverging");
        if (out.nodes_used + 30 > spec.max_nodes) {
            out.value = total;
            out.error_estimate = toterr;
            out.converged = false;
            if (looks_divergent(totals, target))
                throw divergence_error("integral fails to settle: partial sums keep growing");
            return out;
        }

        std::size_t worst = 0;
        double werr = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i)
            if (panels[i].error > werr) {
                werr = panels[i].error;
                worst = i;
            }
        panel w = panels[worst];
        const double mid = 0.5 * (w.a + w.b);
        if (!(mid > w.a && mid < w.b)) {
            // interval can no longer be split in double precision
            out.value = total;
            out.error_estimate = toterr;
            out.converged = toterr <= target;
            return out;
        }
        panels[worst] = gk15(f, w.a, mid, w.depth + 1);
        panels.push_back(gk15(f, mid, w.b, w.depth + 1));
        out.nodes_used += 30;

        double newtotal = 0.0;
        for (const auto& p : panels) newtotal += p.value;
        totals.push_back(newtotal);
    }
}

} // namespace detail

// Integral of f over the finite interval [a, b].
inline quadrature_result integrate_interval(const std::function<double(double)>& f,
                                            double a, double b,
                                            const quadrature_spec& spec = {}) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 0, true};
        throw std::domain_error("integrate_interval: requires a <= b");
    }
    return detail::adaptive(f, a, b, spec);
}

// Surface area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
    if (n < 1) throw std::domain_error("unit_sphere_area: n >= 1 required");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

// |S^{n-1}| * Integral_0^inf f(r) r^{n-1-s} dr, split at `split_radius`:
// the inner piece is integrated directly (open nodes absorb an integrable
// origin singularity), the outer piece under a decay-matched substitution.
inline quadrature_result integrate_radial(const std::function<double(double)>& f,
                                          int n, double s,
                                          const quadrature_spec& spec = {},
                                          tail_kind tail = tail_kind::algebraic,
                                          double split_radius = 1.0) {
    if (n < 1) throw std::domain_error("integrate_radial: n >= 1 required");
    if (!(s < n)) throw std::domain_error("integrate_radial: weight power must satisfy s < n");
    if (!(split_radius > 0.0)) throw std::domain_error("integrate_radial: split radius must be positive");

    const double w = n - 1 - s;
    auto weighted = [&f, w](double r) { return f(r) * std::pow(r, w); };

    quadrature_spec half = spec;
    half.max_nodes = spec.max_nodes / 2;

    const quadrature_result inner =
        detail::adaptive(weighted, 0.0, split_radius, half);

    // Deep subdivision can round a node onto x = 1 exactly, collapsing the
    // substitution to 0 * inf.  Such a node is treated as a far-tail probe: a
    // tail still sizable out at the probe radius cannot have a finite
    // integral and is rejected, while a decaying one contributes nothing
    // there (the panel's error estimate still reports the unresolved edge).
    static constexpr double om_floor = 1e-100;
    quadrature_result outer;
    if (tail == tail_kind::algebraic) {
        auto g = [&weighted, split_radius](double x) {
            const double om = 1.0 - x;
            if (om < om_floor) {
                const double s = weighted(split_radius + 1.0 / om_floor);
                if (std::abs(s) / (om_floor * om_floor) > 1e150)
                    throw divergence_error("tail fails to decay: diverging");
                return 0.0;
            }
            const double r = split_radius + x / om;
            return weighted(r) / (om * om);
        };
        outer = detail::adaptive(g, 0.0, 1.0, half);
    } else {
        auto g = [&weighted, split_radius](double x) {
            const double om = 1.0 - x;
            if (om < om_floor) {
                const double s = weighted(split_radius - std::log(om_floor));
                if (std::abs(s) / om_floor > 1e150)
                    throw divergence_error("tail fails to decay: diverging");
                return 0.0;
            }
            const double r = split_radius - std::log(om);
            return weighted(r) / om;
        };
        outer = detail::adaptive(g, 0.0, 1.0, half);
    }

    quadrature_result out;
    const double area = unit_sphere_area(n);
    out.value = area * (inner.value + outer.value);
    out.error_estimate = area * (inner.error_estimate + outer.error_estimate);
    out.nodes_used = inner.nodes_used + outer.nodes_used;
    out.converged = inner.converged && outer.converged;
    return out;
}

} // namespace quadrature
} // namespace critex

#endif // CRITEX_QUADRATURE_HPP
