#include "bitvar/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace bitvar {

using detail::json;

namespace {

VarModel model_from_parsed(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("Sigma_E")) {
    throw Error(ErrorCode::kConfigError, "model JSON: need \"A\" and \"Sigma_E\"");
  }
  std::vector<Matrix> coeff;
  if (detail::is_matrix_list(j["A"])) {
    for (const json& a : j["A"]) coeff.push_back(detail::matrix_from_json(a, "A"));
  } else {
    coeff.push_back(detail::matrix_from_json(j["A"], "A"));
  }
  Matrix sigma = detail::matrix_from_json(j["Sigma_E"], "Sigma_E");
  if (j.contains("p") && j["p"].get<std::size_t>() != coeff.size()) {
    throw Error(ErrorCode::kConfigError, "model JSON: p disagrees with A");
  }
  if (j.contains("d") && j["d"].get<std::size_t>() != sigma.rows()) {
    throw Error(ErrorCode::kConfigError, "model JSON: d disagrees with Sigma_E");
  }
  try {
    return VarModel(std::move(coeff), std::move(sigma));
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, std::string("model JSON: ") + e.what());
  }
}

}  // namespace

std::string model_to_json(const VarModel& m) {
  json j;
  j["d"] = m.dim();
  j["p"] = m.order();
  json a = json::array();
  for (const Matrix& c : m.coeff()) a.push_back(detail::matrix_to_json(c));
  j["A"] = std::move(a);
  j["Sigma_E"] = detail::matrix_to_json(m.noise_cov());
  return j.dump(2) + "\n";
}

VarModel model_from_json(std::string_view text) {
  try {
    return model_from_parsed(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("model JSON: ") + e.what());
  }
}

VarModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

void save_model(const VarModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << model_to_json(m);
}

}  // namespace bitvar
