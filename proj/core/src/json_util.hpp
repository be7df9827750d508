#pragma once

#include <string>

#include "bitvar/error.hpp"
#include "bitvar/matrix.hpp"
#include "json.hpp"

namespace bitvar::detail {

using nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (double v : m.row(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw Error(ErrorCode::kConfigError, what + ": expected a list of rows");
  }
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) {
      throw Error(ErrorCode::kConfigError, what + ": ragged rows");
    }
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (!j[i][k].is_number()) {
        throw Error(ErrorCode::kConfigError, what + ": non-numeric entry");
      }
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

// A 2-deep array is a single matrix; a 3-deep array is a list of matrices.
inline bool is_matrix_list(const json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() &&
         j[0][0].is_array();
}

}  // namespace bitvar::detail
