#ifndef CRITEX_POTENTIALS_HPP
#define CRITEX_POTENTIALS_HPP

// Integral kernels on radial functions: the homogeneous kernel |x-y|^{alpha-n}
// reduced to its angular average, the exponentially localized kernel defined
// by a heat-time integral with unit mass, their convolutions with radial
// profiles, and a radial Fourier transform for n = 3.

#include "critex/quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace critex {
namespace potentials {

using quadrature::quadrature_result;
using quadrature::quadrature_spec;
using quadrature::tail_kind;

// ===========================================================================
// homogeneous (riesz-type) kernel
// ===========================================================================

// Angular average A(r,s) = Integral_{S^{n-1}} |r e_1 - s w|^{alpha-n} dw.
// Homogeneity gives A(r,s) = r^{alpha-n} Psi(s/r) with Psi(rho) = A(1,rho),
// and Psi(rho) = rho^{alpha-n} Psi(1/rho), so only rho in [0,1] is ever
// evaluated.  For n = 3 the angular integral closes:
//   Psi(rho) = 2 pi [ (1+rho)^{alpha-1} - |1-rho|^{alpha-1} ] / (rho (alpha-1)).
class riesz_kernel {
public:
    riesz_kernel(int n, double alpha) : n_(n), alpha_(alpha) {
        if (n < 2) throw std::domain_error("riesz kernel requires n >= 2");
        if (!(alpha > 1.0 && alpha < n))
            throw std::domain_error("riesz kernel requires 1 < alpha < n");
    }

    int dimension() const { return n_; }
    double order() const { return alpha_; }

    double psi(double rho) const {
        if (rho < 0.0) throw std::domain_error("psi requires rho >= 0");
        if (rho > 1.0) return std::pow(rho, alpha_ - n_) * psi(1.0 / rho);
        if (n_ == 3) {
            const double c = alpha_ - 1.0;
            if (rho < 1e-4) {
                // series: 4 pi (1 + (c-1)(c-2)/6 rho^2 + ...)
                return 4.0 * M_PI * (1.0 + (c - 1.0) * (c - 2.0) / 6.0 * rho * rho);
            }
            return 2.0 * M_PI *
                   (std::pow(1.0 + rho, c) - std::pow(std::abs(1.0 - rho), c)) / (rho * c);
        }
        // general n: integrate over the polar angle
        const double ex = 0.5 * (alpha_ - n_);
        const int m = n_ - 2;
        auto f = [&](double phi) {
            const double d2 = 1.0 + rho * rho - 2.0 * rho * std::cos(phi);
            return std::pow(d2, ex) * std::pow(std::sin(phi), m);
        };
        quadrature_spec spec;
        spec.rel_tol = 1e-12;
        spec.abs_tol = 0.0;
        spec.max_nodes = 20000;
        const double ring = quadrature::unit_sphere_area(n_ - 1);
        return ring * quadrature::integrate_interval(f, 0.0, M_PI, spec).value;
    }

    double angular(double r, double s) const {
        if (r < 0.0 || s < 0.0) throw std::domain_error("angular average requires r, s >= 0");
        if (r == 0.0 && s == 0.0) return std::numeric_limits<double>::infinity();
        const double big = std::max(r, s);
        const double sml = std::min(r, s);
        if (sml == 0.0)
            return quadrature::unit_sphere_area(n_) * std::pow(big, alpha_ - n_);
        return std::pow(big, alpha_ - n_) * psi(sml / big);
    }

private:
    int n_;
    double alpha_;
};

// (K f)(r) = Integral_0^inf f(s) s^{n-1} A(r,s) ds for radial f.
inline quadrature_result riesz_convolve(const std::function<double(double)>& f, int n,
                                        double alpha, double r,
                                        const quadrature_spec& spec = {},
                                        tail_kind tail = tail_kind::algebraic) {
    riesz_kernel ker(n, alpha);
    if (r == 0.0)
        return quadrature::integrate_radial(f, n, n - alpha, spec, tail);

    auto g = [&](double s) { return f(s) * std::pow(s, n - 1) * ker.angular(r, s); };
    quadrature_spec half = spec;
    half.max_nodes = spec.max_nodes / 2;
    const quadrature_result inner = quadrature::integrate_interval(g, 0.0, r, half);
    quadrature_result outer;
    if (tail == tail_kind::algebraic) {
        auto h = [&](double x) {
            const double om = 1.0 - x;
            return g(r + x / om) / (om * om);
        };
        outer = quadrature::integrate_interval(h, 0.0, 1.0, half);
    } else {
        auto h = [&](double x) {
            const double om = 1.0 - x;
            return g(r - std::log(om)) / om;
        };
        outer = quadrature::integrate_interval(h, 0.0, 1.0, half);
    }
    quadrature_result out;
    out.value = inner.value + outer.value;
    out.error_estimate = inner.error_estimate + outer.error_estimate;
    out.nodes_used = inner.nodes_used + outer.nodes_used;
    out.converged = inner.converged && outer.converged;
    return out;
}

// ===========================================================================
// exponentially localized kernel
// ===========================================================================

// g(r) = c * Integral_0^inf (4 pi t)^{(alpha-n)/2} exp(-r^2/(4t) - t) dt/t,
// with c fixed numerically so the kernel has unit mass.  The Fourier symbol
// is then (1 + 4 pi^2 |xi|^2)^{-alpha/2}.
class bessel_kernel {
public:
    bessel_kernel(int n, double alpha) : n_(n), alpha_(alpha) {
        if (n < 2) throw std::domain_error("localized kernel requires n >= 2");
        if (!(alpha > 0.0 && alpha < n))
            throw std::domain_error("localized kernel requires 0 < alpha < n");
        quadrature_spec spec;
        spec.rel_tol = 1e-12;
        spec.abs_tol = 0.0;
        spec.max_nodes = 40000;
        auto raw = [this](double r) { return unnormalized(r); };
        const quadrature_result mass =
            quadrature::integrate_radial(raw, n_, 0.0, spec, tail_kind::exponential);
        if (!mass.converged || !(mass.value > 0.0))
            throw std::runtime_error("kernel normalization integral failed to converge");
        norm_ = 1.0 / mass.value;
    }

    int dimension() const { return n_; }
    double order() const { return alpha_; }
    double normalization() const { return norm_; }

    // heat-time integral before normalization
    double unnormalized(double r) const {
        if (r < 0.0) throw std::domain_error("kernel radius must be nonnegative");
        if (r == 0.0) return std::numeric_limits<double>::infinity();
        if (r > 700.0) return 0.0;  // below double underflow after exp(-r)
        const double M = std::max(50.0, r + 40.0);
        const double disc = std::sqrt(M * M - r * r);
        const double thi = 0.5 * (M + disc);
        // tlo thi = (r/2)^2 exactly; the difference form M - disc cancels
        // catastrophically once r^2 << M^2, so divide instead
        const double tlo = (0.5 * r) * (0.5 * r) / thi;
        if (!(tlo > 0.0)) {
            // radius so small that t_lo underflows: the heat-time integral is
            // already on its power asymptote  Gamma(-ex) (4 pi)^ex (r/2)^{2 ex}
            const double ex0 = 0.5 * (alpha_ - n_);
            return std::tgamma(-ex0) * std::pow(4.0 * M_PI, ex0) *
                   std::pow(0.5 * r, 2.0 * ex0);
        }
        const double ex = 0.5 * (alpha_ - n_);
        auto f = [&](double s) {
            const double t = std::exp(s);
            return std::pow(4.0 * M_PI * t, ex) * std::exp(-r * r / (4.0 * t) - t);
        };
        quadrature_spec spec;
        spec.rel_tol = 1e-13;
        spec.abs_tol = 0.0;
        spec.max_nodes = 4000;
        return quadrature::integrate_interval(f, std::log(tlo), std::log(thi), spec).value;
    }

    double value(double r) const { return norm_ * unnormalized(r); }

    // Fourier side of the kernel (e^{-2 pi i x.xi} convention)
    double symbol(double xi) const {
        return std::pow(1.0 + 4.0 * M_PI * M_PI * xi * xi, -0.5 * alpha_);
    }

private:
    int n_;
    double alpha_;
    double norm_;
};

// Angular average B(r,s) of the localized kernel; the convolution is
// (G f)(r) = Integral_0^inf f(s) s^{n-1} B(r,s) ds.  For n = 3 the angular
// integral reduces to a line integral of g(w) w over [|r-s|, r+s], which at
// alpha = 2 closes to (e^{-|r-s|} - e^{-(r+s)}) / (2 r s).
inline quadrature_result bessel_convolve(const std::function<double(double)>& f,
                                         const bessel_kernel& ker, double r,
                                         const quadrature_spec& spec = {},
                                         tail_kind tail = tail_kind::exponential) {
    const int n = ker.dimension();
    const double alpha = ker.order();

    std::function<double(double, double)> B;  // angular average at (r, s), r > 0
    if (n == 3 && alpha == 2.0) {
        B = [](double rr, double s) {
            return (std::exp(-std::abs(rr - s)) - std::exp(-(rr + s))) / (2.0 * rr * s);
        };
    } else {
        B = [&ker, n](double rr, double s) {
            const int m = n - 2;
            auto h = [&](double phi) {
                const double w2 = rr * rr + s * s - 2.0 * rr * s * std::cos(phi);
                return ker.value(std::sqrt(w2)) * std::pow(std::sin(phi), m);
            };
            quadrature_spec aspec;
            aspec.rel_tol = 1e-9;
            aspec.abs_tol = 0.0;
            aspec.max_nodes = 2000;
            return quadrature::unit_sphere_area(n - 1) *
                   quadrature::integrate_interval(h, 0.0, M_PI, aspec).value;
        };
    }

    if (r == 0.0) {
        // B(0,s) -> |S^{n-1}| g(s)
        auto g0 = [&](double s) { return f(s) * ker.value(s); };
        return quadrature::integrate_radial(g0, n, 0.0, spec, tail);
    }

    auto g = [&](double s) { return f(s) * std::pow(s, n - 1) * B(r, s); };
    quadrature_spec half = spec;
    half.max_nodes = spec.max_nodes / 2;
    const quadrature_result inner = quadrature::integrate_interval(g, 0.0, r, half);
    auto h = [&](double x) {
        const double om = 1.0 - x;
        if (tail == tail_kind::exponential) return g(r - std::log(om)) / om;
        return g(r + x / om) / (om * om);
    };
    const quadrature_result outer = quadrature::integrate_interval(h, 0.0, 1.0, half);

    quadrature_result out;
    out.value = inner.value + outer.value;
    out.error_estimate = inner.error_estimate + outer.error_estimate;
    out.nodes_used = inner.nodes_used + outer.nodes_used;
    out.converged = inner.converged && outer.converged;
    return out;
}

// ===========================================================================
// residual of the integral equation u = K(u^q)
// ===========================================================================

enum class kernel_choice { riesz, localized };

inline double integral_residual(const std::function<double(double)>& u,
                                kernel_choice which, int n, double alpha, double q,
                                double r, const quadrature_spec& spec = {},
                                tail_kind tail = tail_kind::algebraic) {
    auto powq = [&u, q](double s) { return std::pow(u(s), q); };
    if (which == kernel_choice::riesz)
        return u(r) - riesz_convolve(powq, n, alpha, r, spec, tail).value;
    bessel_kernel ker(n, alpha);
    return u(r) - bessel_convolve(powq, ker, r, spec, tail).value;
}

// ===========================================================================
// radial Fourier transform, n = 3
// ===========================================================================

// fhat(xi) = (2/xi) Integral_0^inf f(r) r sin(2 pi xi r) dr for radial f on
// R^3 (e^{-2 pi i x.xi} convention); xi = 0 degenerates to the total mass.
inline double fourier_radial3(const std::function<double(double)>& f, double xi,
                              const quadrature_spec& spec = {},
                              tail_kind tail = tail_kind::exponential) {
    if (xi < 0.0) throw std::domain_error("fourier radius must be nonnegative");
    if (xi == 0.0)
        return quadrature::integrate_radial(f, 3, 0.0, spec, tail).value;

    auto g = [&](double r) { return f(r) * r * std::sin(2.0 * M_PI * xi * r); };
    quadrature_spec half = spec;
    half.max_nodes = spec.max_nodes / 2;
    double acc = quadrature::integrate_interval(g, 0.0, 1.0, half).value;

    // The tail oscillates forever, so a decay-matched compactification would
    // leave an infinitely oscillating transformed integrand near the right
    // endpoint.  Sum half-period blocks instead and stop once the envelope
    // has dropped well below the requested precision of the running total.
    const double hp = 0.5 / xi;
    quadrature_spec piece_spec = spec;
    piece_spec.max_nodes = 900;
    const std::size_t max_blocks =
        std::max<std::size_t>(std::size_t(64), spec.max_nodes / 30);
    double a = 1.0;
    int small_run = 0;
    for (std::size_t j = 0; j < max_blocks; ++j) {
        const double b = a + hp;
        const double piece = quadrature::integrate_interval(g, a, b, piece_spec).value;
        acc += piece;
        const double floor_tol =
            std::max(spec.abs_tol, spec.rel_tol * std::abs(acc));
        small_run = std::abs(piece) <= 0.01 * floor_tol ? small_run + 1 : 0;
        if (small_run >= 2) break;
        a = b;
    }
    return (2.0 / xi) * acc;
}

} // namespace potentials
} // namespace critex

#endif // CRITEX_POTENTIALS_HPP
