#include "fsoqos/atmosphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsoqos::atmosphere {

namespace {

const double kDbPerNeper = 10.0 * std::log10(std::numbers::e);

void require_nonnegative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(name) + " must be a finite nonnegative number");
    }
}

}  // namespace

void OpticalPath::validate() const {
    if (!(wavelength_nm > 0.0)) throw std::domain_error("wavelength_nm must be positive");
    if (!(reference_wavelength_nm > 0.0)) throw std::domain_error("reference_wavelength_nm must be positive");
    if (!(visibility_km > 0.0)) throw std::domain_error("visibility_km must be positive");
    require_nonnegative(range_km, "range_km");
    if (!(transmittance_threshold > 0.0 && transmittance_threshold < 1.0)) {
        throw std::domain_error("transmittance_threshold must lie strictly between 0 and 1");
    }
}

double particle_size_exponent(double visibility_km, AttenuationModel model) {
    if (!(visibility_km > 0.0) || !std::isfinite(visibility_km)) {
        throw std::domain_error("visibility must be positive and finite");
    }
    const double v = visibility_km;
    if (v >= 50.0) return 1.6;
    if (v >= 6.0) return 1.3;
    switch (model) {
        case AttenuationModel::Kruse:
            return 0.585 * std::cbrt(v);
        case AttenuationModel::Kim:
            if (v >= 1.0) return 0.16 * v + 0.34;
            if (v >= 0.5) return v - 0.5;
            return 0.0;
    }
    throw std::invalid_argument("unknown attenuation model");
}

double extinction_coefficient(const OpticalPath& path, AttenuationModel model) {
    path.validate();
    const double q = particle_size_exponent(path.visibility_km, model);
    const double at_reference = -std::log(path.transmittance_threshold) / path.visibility_km;
    if (q == 0.0) return at_reference;
    return at_reference * std::pow(path.wavelength_nm / path.reference_wavelength_nm, -q);
}

double transmittance(double beta_per_km, double range_km) {
    require_nonnegative(beta_per_km, "beta_per_km");
    require_nonnegative(range_km, "range_km");
    return std::exp(-beta_per_km * range_km);
}

double path_attenuation_db(double beta_per_km, double range_km) {
    require_nonnegative(beta_per_km, "beta_per_km");
    require_nonnegative(range_km, "range_km");
    return kDbPerNeper * beta_per_km * range_km;
}

double to_db_per_km(double beta_per_km) { return kDbPerNeper * beta_per_km; }

double from_db_per_km(double atten_db_per_km) { return atten_db_per_km / kDbPerNeper; }

std::string_view to_string(AttenuationModel model) {
    return model == AttenuationModel::Kruse ? "kruse" : "kim";
}

AttenuationModel parse_attenuation_model(std::string_view name) {
    if (name == "kruse") return AttenuationModel::Kruse;
    if (name == "kim") return AttenuationModel::Kim;
    throw std::invalid_argument("unknown attenuation model '" + std::string(name) + "' (expected kruse or kim)");
}

}  // namespace fsoqos::atmosphere
