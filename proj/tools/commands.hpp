#pragma once

#include <filesystem>
#include <string>

#include "malab/keyvalue.hpp"

namespace malab::cli {

/// Exit codes: 0 every certificate passed, 1 a certificate failed,
/// 2 the run itself failed (bad config, module error).
inline constexpr int kExitPass = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitError = 2;

/// Multiplier applied to acceptance tolerances, read from MALAB_TOL_SCALE
/// (1 when unset).
double tolerance_scale();

int cmd_radial_expand(const KeyValueDoc& config, const std::filesystem::path& out_dir);
int cmd_poisson(const KeyValueDoc& config, const std::filesystem::path& out_dir);
int cmd_extract(const KeyValueDoc& config, const std::filesystem::path& out_dir);

}  // namespace malab::cli
