#pragma once

#include <json.hpp>

#include "dtqmc/matrix.hpp"

namespace dtqmc {

class KrausChannel;

// Matrix wire format: {"rows": R, "cols": C, "entries": [[re, im], ...]}
// with entries in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

// Channel wire format: {"dim": N, "kraus_ops": [matrix, ...]} with the
// operators in their stored order.
nlohmann::json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const nlohmann::json& j);

}  // namespace dtqmc
