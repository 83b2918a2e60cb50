#include "dtqmc/json_io.hpp"

#include "dtqmc/channel.hpp"

namespace dtqmc {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& a) {
  json entries = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      entries.push_back({a(i, j).real(), a(i, j).imag()});
    }
  }
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries")) {
    throw InvalidValueError("matrix_from_json: expected {rows, cols, entries}");
  }
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  if (rows < 1 || cols < 1) {
    throw InvalidDimsError("matrix_from_json: nonpositive dimensions");
  }
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<Index>(entries.size()) != rows * cols) {
    throw InvalidDimsError("matrix_from_json: entry count does not match rows*cols");
  }
  ComplexMatrix a(rows, cols);
  Index idx = 0;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2) {
      throw InvalidValueError("matrix_from_json: entries must be [re, im] pairs");
    }
    a(idx / cols, idx % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    ++idx;
  }
  if (!is_finite(a)) {
    throw InvalidValueError("matrix_from_json: non-finite entries");
  }
  return a;
}

json channel_to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (std::size_t k = 0; k < ch.size(); ++k) {
    ops.push_back(matrix_to_json(ch.dense_op(k)));
  }
  return json{{"dim", ch.dim()}, {"kraus_ops", std::move(ops)}};
}

KrausChannel channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kraus_ops")) {
    throw InvalidValueError("channel_from_json: expected {dim, kraus_ops}");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& m : j.at("kraus_ops")) {
    ops.push_back(matrix_from_json(m));
  }
  return KrausChannel::from_dense(ops);
}

}  // namespace dtqmc
