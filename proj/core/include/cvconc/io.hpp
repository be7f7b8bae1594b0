#ifndef CVCONC_IO_HPP
#define CVCONC_IO_HPP

#include <string>
#include <string_view>

#include "cvconc/fock.hpp"
#include "cvconc/teleport.hpp"

namespace cvconc {

/// Locale-independent round-trip formatting with 17 significant digits; NaN prints as "nan".
std::string format_double(double value);

/// {"lambda_meta": <real or absent>, "coeffs": [[re, im], ...]}
std::string schmidt_to_json(const SchmidtState& state);

/// Parses the JSON form above. Coefficients must already be normalized.
/// Throws DomainError on malformed input.
SchmidtState schmidt_from_json(std::string_view text);

/// Columns n, re, im, abs2 with a header row.
std::string schmidt_to_csv(const SchmidtState& state);

/// {"fidelity": ..., "imag_residual": ..., "terms_used": ...}
std::string fidelity_to_json(const FidelityResult& result);

}  // namespace cvconc

#endif  // CVCONC_IO_HPP
