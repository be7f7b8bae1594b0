#include "cvconc/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "cvconc/errors.hpp"
#include "json.hpp"

namespace cvconc {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string schmidt_to_json(const SchmidtState& state) {
  ordered_json j;
  if (state.lambda_meta()) j["lambda_meta"] = *state.lambda_meta();
  j["coeffs"] = ordered_json::array();
  for (const auto& d : state.coeffs()) j["coeffs"].push_back({d.real(), d.imag()});
  return j.dump();
}

SchmidtState schmidt_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DomainError(std::string("malformed Schmidt state JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw DomainError("Schmidt state JSON needs a \"coeffs\" array");
  }
  std::vector<Amplitude> coeffs;
  for (const auto& pair : j["coeffs"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw DomainError("each coefficient must be a [re, im] pair of numbers");
    }
    coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  auto state = SchmidtState::from_coefficients(std::move(coeffs));
  if (j.contains("lambda_meta") && !j["lambda_meta"].is_null()) {
    if (!j["lambda_meta"].is_number()) throw DomainError("lambda_meta must be a number");
    state = state.with_lambda_meta(j["lambda_meta"].get<double>());
  }
  return state;
}

std::string schmidt_to_csv(const SchmidtState& state) {
  std::ostringstream out;
  out << "n,re,im,abs2\n";
  for (std::size_t n = 0; n < state.size(); ++n) {
    const auto d = state[n];
    out << n << ',' << format_double(d.real()) << ',' << format_double(d.imag()) << ','
        << format_double(std::norm(d)) << '\n';
  }
  return out.str();
}

std::string fidelity_to_json(const FidelityResult& result) {
  ordered_json j;
  j["fidelity"] = result.fidelity;
  j["imag_residual"] = result.imag_residual;
  j["terms_used"] = result.terms_used;
  return j.dump();
}

}  // namespace cvconc
