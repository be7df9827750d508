#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bitvar/var_model.hpp"

namespace bitvar {

/// {"d": d, "p": p, "A": [A_1, ..., A_p], "Sigma_E": [[..], ..]} with each
/// matrix as a list of rows. Doubles are written with round-trip precision.
std::string model_to_json(const VarModel& m);

/// Accepts the layout above; for p = 1 "A" may also be a single matrix.
/// Throws kConfigError on malformed input.
VarModel model_from_json(std::string_view text);

VarModel load_model(const std::filesystem::path& path);
void save_model(const VarModel& m, const std::filesystem::path& path);

}  // namespace bitvar
