#include "hsl/model_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace hsl {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string array_17(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string model_to_json(const Classifier& model) {
  if (const auto* h = model.halfspace()) {
    return R"({"kind":"halfspace","d":)" + std::to_string(h->dim()) + R"(,"w":)" + array_17(h->w()) + "}";
  }
  const PolyThreshold& f = *model.poly_threshold();
  return R"({"kind":"poly_threshold","d":)" + std::to_string(f.p.dim()) + R"(,"degree":)" +
         std::to_string(f.p.degree()) + R"(,"coeffs":)" + array_17(f.p.coefficients()) +
         R"(,"theta":)" + format_double(f.theta) + "}";
}

Classifier model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "halfspace") {
      auto w = j.at("w").get<std::vector<double>>();
      if (j.contains("d") && j.at("d").get<std::size_t>() != w.size()) throw IoError("d does not match w");
      if (std::abs(norm2(w) - 1.0) <= Hyperplane::kUnitTolerance) return Hyperplane::from_unit(std::move(w));
      return normalize(w);
    }
    if (kind == "poly_threshold") {
      Polynomial p(j.at("d").get<std::size_t>(), j.at("degree").get<std::size_t>(),
                   j.at("coeffs").get<std::vector<double>>());
      return PolyThreshold{std::move(p), j.at("theta").get<double>()};
    }
    throw IoError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed model JSON: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw IoError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace hsl
