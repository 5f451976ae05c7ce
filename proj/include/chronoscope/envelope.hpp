#ifndef CHRONOSCOPE_ENVELOPE_HPP
#define CHRONOSCOPE_ENVELOPE_HPP

// Sampled complex pulse envelopes on uniform time grids, and the Fourier conventions
// every other module builds on.
//
// Spectrum convention: S(Omega) = integral A(t) exp(+i Omega t) dt, inverted by
// A(t) = (1/2pi) integral S(Omega) exp(-i Omega t) dOmega. Under this convention a
// dispersive element of GDD D multiplies S by exp(+i D Omega^2/2) and a time lens of
// focal GDD D_f multiplies A by exp(+i t^2/(2 D_f)); the pair is pinned by the
// single-lens imaging test (see tests), which only closes with these relative signs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "chronoscope/errors.hpp"
#include "chronoscope/units.hpp"

namespace chronoscope {

using complexd = std::complex<double>;

inline bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// Uniform time grid: t_j = t_center + (j - n/2) dt, j = 0..n-1.
// The conjugate frequency grid is Omega_k = (k - n/2) dOmega, dOmega = 2pi/(n dt),
// spanning [-pi/dt, pi/dt).
struct TimeGrid {
    int n_points = 0;
    double dt = 0.0;      // ps
    double t_center = 0.0;

    TimeGrid() = default;
    TimeGrid(int n, double dt_, double t_center_ = 0.0)
        : n_points(n), dt(dt_), t_center(t_center_) {
        if (!is_power_of_two(n_points) || n_points < 2)
            throw InvalidGrid("n_points must be a power of two >= 2, got " + std::to_string(n));
        if (!(dt > 0.0))
            throw InvalidGrid("dt must be positive");
    }

    double t(int j) const { return t_center + (j - n_points / 2) * dt; }
    double t_min() const { return t(0); }
    double window() const { return n_points * dt; }
    double d_omega() const { return two_pi / (n_points * dt); }
    double omega(int k) const { return (k - n_points / 2) * d_omega(); }
    double omega_max() const { return pi / dt; }  // Nyquist angular frequency

    bool operator==(const TimeGrid& o) const {
        return n_points == o.n_points && dt == o.dt && t_center == o.t_center;
    }
};

struct SampledEnvelope {
    TimeGrid grid;
    Eigen::VectorXcd samples;  // A(t_j)

    SampledEnvelope() = default;
    SampledEnvelope(const TimeGrid& g, Eigen::VectorXcd s) : grid(g), samples(std::move(s)) {
        if (samples.size() != grid.n_points)
            throw InvalidGrid("sample count does not match grid");
    }
};

// Spectrum sampled on the grid conjugate to `grid`; values[k] = S(Omega_k).
struct SampledSpectrum {
    TimeGrid grid;
    Eigen::VectorXcd values;

    double omega(int k) const { return grid.omega(k); }
    double d_omega() const { return grid.d_omega(); }
};

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
    // Eigen's FFT caches plans per size internally.
    static thread_local Eigen::FFT<double> fft;
    return fft;
}

}  // namespace detail

// S_k = dt * sum_j A_j exp(+i Omega_k t_j); exact discretization of the convention above.
inline SampledSpectrum to_spectrum(const SampledEnvelope& env) {
    const TimeGrid& g = env.grid;
    const int n = g.n_points;
    const double d_om = g.d_omega();
    const double omega_min = g.omega(0);
    const double t_min = g.t_min();

    Eigen::VectorXcd pre(n);
    for (int j = 0; j < n; ++j)
        pre[j] = env.samples[j] * std::polar(1.0, omega_min * g.t(j));
    Eigen::VectorXcd raw;
    detail::fft_engine().inv(raw, pre);  // (1/n) sum_j pre_j exp(+2pi i jk/n)
    SampledSpectrum spec{g, Eigen::VectorXcd(n)};
    for (int k = 0; k < n; ++k)
        spec.values[k] = raw[k] * static_cast<double>(n) * g.dt * std::polar(1.0, k * d_om * t_min);
    return spec;
}

inline SampledEnvelope from_spectrum(const SampledSpectrum& spec) {
    const TimeGrid& g = spec.grid;
    const int n = g.n_points;
    const double d_om = g.d_omega();
    const double omega_min = g.omega(0);
    const double t_min = g.t_min();

    Eigen::VectorXcd pre(n);
    for (int k = 0; k < n; ++k)
        pre[k] = spec.values[k] * std::polar(1.0, -k * d_om * t_min);
    Eigen::VectorXcd raw;
    detail::fft_engine().fwd(raw, pre);  // sum_k pre_k exp(-2pi i jk/n)
    SampledEnvelope out{g, Eigen::VectorXcd(n)};
    const double scale = 1.0 / (n * g.dt);
    for (int j = 0; j < n; ++j)
        out.samples[j] = raw[j] * scale * std::polar(1.0, -omega_min * g.t(j));
    return out;
}

// trapezoid integral of |A|^2 over the grid window
inline double energy(const SampledEnvelope& env) {
    const int n = env.grid.n_points;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        sum += w * std::norm(env.samples[j]);
    }
    return sum * env.grid.dt;
}

inline double energy(const SampledSpectrum& spec) {
    const int n = spec.grid.n_points;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        sum += w * std::norm(spec.values[k]);
    }
    return sum * spec.d_omega() / two_pi;
}

namespace detail {

// FWHM of a sampled intensity profile from the outermost half-maximum crossings,
// linearly interpolated between samples.
inline double interpolated_fwhm(const std::vector<double>& axis, const std::vector<double>& intensity) {
    const int n = static_cast<int>(axis.size());
    int peak = 0;
    for (int i = 1; i < n; ++i)
        if (intensity[i] > intensity[peak]) peak = i;
    const double half = 0.5 * intensity[peak];
    if (half <= 0.0) return 0.0;

    int lo = -1;
    for (int i = 0; i <= peak; ++i)
        if (intensity[i] >= half) { lo = i; break; }
    int hi = -1;
    for (int i = n - 1; i >= peak; --i)
        if (intensity[i] >= half) { hi = i; break; }

    double left = axis[lo];
    if (lo > 0 && intensity[lo] != intensity[lo - 1])
        left = axis[lo - 1] + (axis[lo] - axis[lo - 1]) * (half - intensity[lo - 1]) / (intensity[lo] - intensity[lo - 1]);
    double right = axis[hi];
    if (hi < n - 1 && intensity[hi] != intensity[hi + 1])
        right = axis[hi] + (axis[hi + 1] - axis[hi]) * (intensity[hi] - half) / (intensity[hi] - intensity[hi + 1]);
    return right - left;
}

struct WeightedMoments {
    double mean = 0.0, std = 0.0;
};

inline WeightedMoments weighted_moments(const std::vector<double>& axis, const std::vector<double>& weight,
                                        double step) {
    const int n = static_cast<int>(axis.size());
    double norm = 0.0, m1 = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * weight[i] * step;
        norm += w;
        m1 += w * axis[i];
    }
    if (!(norm > 0.0)) throw ZeroEnergy("cannot compute moments of a zero-energy profile");
    m1 /= norm;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * weight[i] * step;
        m2 += w * (axis[i] - m1) * (axis[i] - m1);
    }
    return {m1, std::sqrt(m2 / norm)};
}

}  // namespace detail

struct EnvelopeMoments {
    double t_mean = 0.0;       // ps
    double delta_t = 0.0;      // intensity std, ps
    double fwhm_t = 0.0;       // ps
    double omega_mean = 0.0;   // rad/ps
    double delta_omega = 0.0;  // spectral intensity std, rad/ps
    double fwhm_omega = 0.0;   // rad/ps
    double energy = 0.0;
};

inline EnvelopeMoments measure_moments(const SampledEnvelope& env) {
    const int n = env.grid.n_points;
    std::vector<double> t_axis(n), intensity(n);
    for (int j = 0; j < n; ++j) {
        t_axis[j] = env.grid.t(j);
        intensity[j] = std::norm(env.samples[j]);
    }
    EnvelopeMoments m;
    auto tm = detail::weighted_moments(t_axis, intensity, env.grid.dt);
    m.t_mean = tm.mean;
    m.delta_t = tm.std;
    m.fwhm_t = detail::interpolated_fwhm(t_axis, intensity);
    m.energy = energy(env);

    SampledSpectrum spec = to_spectrum(env);
    std::vector<double> om_axis(n), sdens(n);
    for (int k = 0; k < n; ++k) {
        om_axis[k] = spec.omega(k);
        sdens[k] = std::norm(spec.values[k]);
    }
    auto sm = detail::weighted_moments(om_axis, sdens, spec.d_omega());
    m.omega_mean = sm.mean;
    m.delta_omega = sm.std;
    m.fwhm_omega = detail::interpolated_fwhm(om_axis, sdens);
    return m;
}

struct GaussianPulseSpec {
    double sigma_t = 1.0;    // intensity std Delta t0, ps
    double t0 = 0.0;         // center, ps
    double amplitude = 1.0;  // peak field amplitude
    double chirp_c2 = 0.0;   // quadratic phase coefficient, rad/ps^2 (phase = c2 (t-t0)^2/2)
};

// A(t) = amplitude * exp(-(t-t0)^2/(4 sigma_t^2)) * exp(i c2 (t-t0)^2/2).
// Guards: the window must leave >= 8 sigma_t on each side of t0, and the Nyquist
// frequency must exceed 4x the estimated (chirped) bandwidth.
inline SampledEnvelope make_gaussian(const TimeGrid& grid, const GaussianPulseSpec& spec) {
    if (!(spec.sigma_t > 0.0)) throw InvalidGrid("sigma_t must be positive");
    const double left = spec.t0 - grid.t_min();
    const double right = (grid.t_min() + grid.window()) - spec.t0;
    if (left < 8.0 * spec.sigma_t || right < 8.0 * spec.sigma_t)
        throw WindowTooSmall("grid window leaves less than 8 sigma_t around t0 (margins " +
                             std::to_string(left) + ", " + std::to_string(right) + " ps for sigma_t " +
                             std::to_string(spec.sigma_t) + " ps)");
    const double bw_estimate = 0.5 / spec.sigma_t + std::abs(spec.chirp_c2) * 4.0 * spec.sigma_t;
    if (grid.omega_max() < 4.0 * bw_estimate)
        throw AliasingRisk("Nyquist frequency " + std::to_string(grid.omega_max()) +
                           " rad/ps below 4x estimated bandwidth " + std::to_string(bw_estimate) + " rad/ps");

    SampledEnvelope env{grid, Eigen::VectorXcd(grid.n_points)};
    const double inv4s2 = 1.0 / (4.0 * spec.sigma_t * spec.sigma_t);
    for (int j = 0; j < grid.n_points; ++j) {
        const double x = grid.t(j) - spec.t0;
        env.samples[j] = spec.amplitude * std::exp(-x * x * inv4s2) *
                         std::polar(1.0, 0.5 * spec.chirp_c2 * x * x);
    }
    return env;
}

// Quadratic coefficient c2 of the unwrapped phase (phi ~ c0 + c1 t + c2 t^2/2),
// fit by intensity-weighted least squares over the largest contiguous run of samples
// with |A|^2 >= 1e-4 * max that contains the intensity peak. A wrapped phase step close
// to +-pi between adjacent significant samples means the branch is ambiguous there and
// raises PhaseUnwrapFailure.
inline double residual_chirp(const SampledEnvelope& env) {
    const int n = env.grid.n_points;
    std::vector<double> intensity(n);
    double imax = 0.0;
    int peak = 0;
    for (int j = 0; j < n; ++j) {
        intensity[j] = std::norm(env.samples[j]);
        if (intensity[j] > imax) { imax = intensity[j]; peak = j; }
    }
    if (!(imax > 0.0)) throw ZeroEnergy("residual_chirp of a zero envelope");
    const double thr = 1e-4 * imax;

    int lo = peak, hi = peak;
    while (lo > 0 && intensity[lo - 1] >= thr) --lo;
    while (hi < n - 1 && intensity[hi + 1] >= thr) ++hi;
    if (hi - lo < 4)
        throw PhaseUnwrapFailure("fewer than 5 significant samples around the peak");

    // unwrap across the run
    const double jump_limit = pi - 0.1;
    std::vector<double> phase(hi - lo + 1);
    phase[0] = std::arg(env.samples[lo]);
    for (int j = lo + 1; j <= hi; ++j) {
        double d = std::arg(env.samples[j]) - std::arg(env.samples[j - 1]);
        while (d > pi) d -= two_pi;
        while (d <= -pi) d += two_pi;
        if (std::abs(d) > jump_limit)
            throw PhaseUnwrapFailure("phase step " + std::to_string(d) + " rad at t = " +
                                     std::to_string(env.grid.t(j)) + " ps is branch-ambiguous");
        phase[j - lo] = phase[j - lo - 1] + d;
    }

    // weighted LSQ fit of phi(t) = a + b x + (c2/2) x^2 around the weighted mean time
    double wsum = 0.0, tbar = 0.0;
    for (int j = lo; j <= hi; ++j) { wsum += intensity[j]; tbar += intensity[j] * env.grid.t(j); }
    tbar /= wsum;
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (int j = lo; j <= hi; ++j) {
        const double x = env.grid.t(j) - tbar;
        const Eigen::Vector3d row(1.0, x, 0.5 * x * x);
        ata += intensity[j] * row * row.transpose();
        atb += intensity[j] * phase[j - lo] * row;
    }
    Eigen::Vector3d coef = ata.ldlt().solve(atb);
    return coef[2];
}

// complex inner product <a, b> = integral conj(a) b dt  (trapezoid)
inline complexd inner_product(const SampledEnvelope& a, const SampledEnvelope& b) {
    if (!(a.grid == b.grid)) throw InvalidGrid("inner_product requires matching grids");
    const int n = a.grid.n_points;
    complexd sum = 0.0;
    for (int j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        sum += w * std::conj(a.samples[j]) * b.samples[j];
    }
    return sum * a.grid.dt;
}

// || b - e^{i phi} a || / || b ||, with the global phase phi taken from the inner
// product — the natural figure of merit for comparisons where absolute phase is free.
inline double relative_l2_mod_phase(const SampledEnvelope& a, const SampledEnvelope& b) {
    complexd ip = inner_product(a, b);
    complexd rot = (std::abs(ip) > 0.0) ? ip / std::abs(ip) : complexd(1.0, 0.0);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < a.grid.n_points; ++j) {
        num += std::norm(b.samples[j] - rot * a.samples[j]);
        den += std::norm(b.samples[j]);
    }
    if (!(den > 0.0)) throw ZeroEnergy("relative_l2_mod_phase against a zero reference");
    return std::sqrt(num / den);
}

namespace detail {

// Catmull-Rom interpolation of one sample train at arbitrary time x; zero outside the grid.
inline complexd catmull_rom_at(const SampledEnvelope& env, double x) {
    const TimeGrid& g = env.grid;
    const double u = (x - g.t_min()) / g.dt;
    const int i = static_cast<int>(std::floor(u));
    if (i < -1 || i > g.n_points - 1) return 0.0;
    const double f = u - i;
    auto at = [&](int k) -> complexd {
        return (k >= 0 && k < g.n_points) ? env.samples[k] : complexd(0.0, 0.0);
    };
    const complexd p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * f + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * f * f +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * f * f * f);
}

}  // namespace detail

// cubic resampling of an envelope onto another grid (zero outside the source window)
inline SampledEnvelope resample(const SampledEnvelope& env, const TimeGrid& target) {
    SampledEnvelope out{target, Eigen::VectorXcd(target.n_points)};
    for (int j = 0; j < target.n_points; ++j)
        out.samples[j] = detail::catmull_rom_at(env, target.t(j));
    return out;
}

}  // namespace chronoscope

#endif
