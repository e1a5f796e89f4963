#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "holonomy/transport.hpp"

namespace holonomy::io {

using json = nlohmann::json;

/// Deterministic text form: sorted keys, doubles with 17 significant digits.
std::string dump(const json& value, int indent = 2);

json complex_to_json(Complex z);
Complex complex_from_json(const json& value, const std::string& field);

/// Row-major [[[re, im], ...], ...].
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& value, const std::string& field);

json real_matrix_to_json(const RMatrix& m);
RMatrix real_matrix_from_json(const json& value, const std::string& field);

/// {"d_a", "d_b", "matrix"}.
json to_json(const states::DensityMatrix& rho);
states::DensityMatrix density_from_json(const json& value);

/// {"d_a", "d_b", "stokes"}.
json to_json(const states::StokesTensor& s);
states::StokesTensor stokes_from_json(const json& value);

json to_json(const transport::TransportRecord& record);

}  // namespace holonomy::io
