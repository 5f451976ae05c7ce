#ifndef CHRONOSCOPE_CSV_HPP
#define CHRONOSCOPE_CSV_HPP

// CSV writers for the artifact files the command-line tool emits. All writers
// share the same contract: one header line, rows in ascending coordinate order,
// every number formatted with %.12g, LF line endings, no timestamps. Two runs
// with the same inputs produce byte-identical files.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "chronoscope/elements.hpp"
#include "chronoscope/envelope.hpp"
#include "chronoscope/hom.hpp"
#include "chronoscope/spdc.hpp"

namespace chronoscope {

namespace detail {

inline std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace detail

// t_ps,re,im,intensity
inline void write_envelope_csv(std::ostream& os, const SampledEnvelope& env) {
    os << "t_ps,re,im,intensity\n";
    for (int i = 0; i < env.grid.n_points; ++i) {
        const std::complex<double> a = env.samples(i);
        os << detail::g12(env.grid.t(i)) << ',' << detail::g12(a.real()) << ','
           << detail::g12(a.imag()) << ',' << detail::g12(std::norm(a)) << '\n';
    }
}

// omega_rad_per_ps,re,im,spectral_density
inline void write_spectrum_csv(std::ostream& os, const SampledSpectrum& spec) {
    os << "omega_rad_per_ps,re,im,spectral_density\n";
    for (int i = 0; i < spec.values.size(); ++i) {
        const std::complex<double> s = spec.values(i);
        os << detail::g12(spec.omega(i)) << ',' << detail::g12(s.real()) << ','
           << detail::g12(s.imag()) << ',' << detail::g12(std::norm(s)) << '\n';
    }
}

// stage,delta_t_ps,delta_omega,energy,chirp_c2
inline void write_stages_csv(std::ostream& os, const std::vector<StageReport>& stages) {
    os << "stage,delta_t_ps,delta_omega,energy,chirp_c2\n";
    for (const StageReport& st : stages) {
        os << st.index << ':' << st.kind << ',' << detail::g12(st.delta_t) << ','
           << detail::g12(st.delta_omega) << ',' << detail::g12(st.energy) << ','
           << detail::g12(st.chirp_c2) << '\n';
    }
}

// omega_rad_per_ps,omega_prime_rad_per_ps,re,im,abs2 — row-major over (omega, omega')
inline void write_jsa_csv(std::ostream& os, const JointSpectralAmplitude& j) {
    os << "omega_rad_per_ps,omega_prime_rad_per_ps,re,im,abs2\n";
    for (int i = 0; i < j.omega_o.size(); ++i)
        for (int k = 0; k < j.omega_e.size(); ++k) {
            const std::complex<double> v = j.values(i, k);
            os << detail::g12(j.omega_o(i)) << ',' << detail::g12(j.omega_e(k)) << ','
               << detail::g12(v.real()) << ',' << detail::g12(v.imag()) << ','
               << detail::g12(std::norm(v)) << '\n';
        }
}

// omega_rad_per_ps,density — one marginal profile per file
inline void write_marginal_csv(std::ostream& os, const Eigen::VectorXd& omega,
                               const Eigen::VectorXd& density) {
    os << "omega_rad_per_ps,density\n";
    for (int i = 0; i < omega.size(); ++i)
        os << detail::g12(omega(i)) << ',' << detail::g12(density(i)) << '\n';
}

// delay_ps,p_int,normalized_rate
inline void write_hom_curve_csv(std::ostream& os, const HomCurve& curve) {
    os << "delay_ps,p_int,normalized_rate\n";
    for (int i = 0; i < curve.delays.size(); ++i)
        os << detail::g12(curve.delays(i)) << ',' << detail::g12(curve.p_int(i)) << ','
           << detail::g12(curve.normalized_rate(i)) << '\n';
}

// M,visibility,argmax_delay_ps
inline void write_visibility_scan_csv(std::ostream& os, const std::vector<VisibilityPoint>& scan) {
    os << "M,visibility,argmax_delay_ps\n";
    for (const VisibilityPoint& p : scan)
        os << detail::g12(p.magnification) << ',' << detail::g12(p.visibility) << ','
           << detail::g12(p.argmax_delay) << '\n';
}

}  // namespace chronoscope

#endif  // CHRONOSCOPE_CSV_HPP
