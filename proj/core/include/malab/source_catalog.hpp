#pragma once

#include <string>
#include <vector>

#include "malab/exterior_poisson.hpp"

namespace malab::poisson {

/// Built-in test sources with closed-form envelopes.
///   radial_inv_r     n=3  1/r
///   y1_k15           n=3  r^-1.5 Y1
///   y1_inv_r_3d      n=3  r^-1 Y1
///   radial_inv_r2    n=2  r^-2
///   radial_k05_log   n=3  r^-0.5 ln r
///   y2_k2_log        n=3  r^-2 ln r (1 + Y2)
///   radial_inv_r4    n=3  r^-4
///   y1_inv_r         n=2  r^-1 Y1
///   mixed_k15        n=2  r^-1.5 ln r (1 + Y1 + Y2)
/// Y1, Y2 are unit-norm degree-1 and degree-2 harmonics.
std::vector<std::string> catalog_names();
SourceSpec catalog_source(const std::string& name);

}  // namespace malab::poisson
