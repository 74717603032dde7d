#pragma once

#include "fieldmech/model_config.hpp"
#include "fieldmech/phase_space.hpp"

namespace fieldmech::tools {

/// Initial phase-space point for a parsed model. Preset or expression
/// (E, B) data is realized in the configured gauge: the vector potential is
/// the radial-gauge line integral (projected transverse for Coulomb), phi
/// comes from the matching scalar reconstruction, and pi = -eps0 E.
FieldState build_state(const ModelConfig& cfg);

}  // namespace fieldmech::tools
