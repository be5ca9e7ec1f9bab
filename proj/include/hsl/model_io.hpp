#pragma once

#include <string>

#include "hsl/learners.hpp"

namespace hsl {

/// {"kind":"halfspace","d":..,"w":[..]} or
/// {"kind":"poly_threshold","d":..,"degree":..,"coeffs":[..],"theta":..},
/// every float written with 17 significant digits.
std::string model_to_json(const Classifier& model);

/// Inverse of model_to_json; throws IoError on malformed input.
Classifier model_from_json(const std::string& text);

/// printf("%.17g") rendering used by every serializer in the project.
std::string format_double(double v);

}  // namespace hsl
