#ifndef CHRONOSCOPE_UNITS_HPP
#define CHRONOSCOPE_UNITS_HPP

// Unit conventions used throughout:
//   time        picoseconds (ps)
//   frequency   angular detuning, rad/ps
//   dispersion  group-delay dispersion, ps^2
//   wavelength  nanometers (nm)
//   angles      radians internally, degrees at the I/O boundary
// CLI-facing bandwidths are ordinary frequencies in GHz; 1 GHz = 2*pi*1e-3 rad/ps.

#include <cmath>

namespace chronoscope {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// speed of light in nm/ps (= 2.99792458e5)
inline constexpr double c_nm_per_ps = 299792.458;

// 2*sqrt(2*ln 2): FWHM of a Gaussian intensity profile / its standard deviation
inline const double fwhm_per_sigma = 2.0 * std::sqrt(2.0 * std::log(2.0));

inline const double four_ln2 = 4.0 * std::log(2.0);

inline double ghz_to_rad_per_ps(double nu_ghz) { return two_pi * nu_ghz * 1e-3; }
inline double rad_per_ps_to_ghz(double omega) { return omega / two_pi * 1e3; }

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

// vacuum angular frequency (rad/ps) of light at wavelength lambda (nm)
inline double omega_of_wavelength_nm(double lambda_nm) {
    return two_pi * c_nm_per_ps / lambda_nm;
}

inline double wavelength_nm_of_omega(double omega) {
    return two_pi * c_nm_per_ps / omega;
}

}  // namespace chronoscope

#endif
