#pragma once

#include <string_view>

namespace fsoqos::atmosphere {

/// Particle-size-distribution law used for the wavelength exponent q(V).
enum class AttenuationModel { Kruse, Kim };

/// Geometry and meteorology of one optical path.
struct OpticalPath {
    double wavelength_nm = 1550.0;
    double range_km = 1.0;
    double visibility_km = 1.0;
    double reference_wavelength_nm = 550.0;
    /// Visual-range contrast threshold; 2% for optical links.
    double transmittance_threshold = 0.02;

    /// Throws std::domain_error when a field is out of range.
    void validate() const;
};

/// Wavelength-dependence exponent q(V) of the selected scattering law.
///
/// Piecewise boundaries are half-open upward: Kim gives q(0.5)=0, q(1)=0.5,
/// q(6)=1.3 and q(50)=1.6; Kruse switches to 1.3 at V=6 and 1.6 at V=50.
double particle_size_exponent(double visibility_km, AttenuationModel model);

/// Extinction coefficient in km^-1:
///   beta = (-ln T_th / V) * (lambda / lambda_ref)^(-q(V)).
double extinction_coefficient(const OpticalPath& path, AttenuationModel model);

/// Beer-Lambert transmittance exp(-beta L).
double transmittance(double beta_per_km, double range_km);

/// Path loss in dB, 10 log10(e) beta L.
double path_attenuation_db(double beta_per_km, double range_km);

/// km^-1 to dB/km.
double to_db_per_km(double beta_per_km);

/// dB/km to km^-1.
double from_db_per_km(double atten_db_per_km);

std::string_view to_string(AttenuationModel model);
/// Accepts "kruse" or "kim"; throws std::invalid_argument otherwise.
AttenuationModel parse_attenuation_model(std::string_view name);

}  // namespace fsoqos::atmosphere
