#pragma once

#include <string>
#include <vector>

#include "ratecert/model.hpp"

namespace ratecert {

/// Parsed form of the JSON algorithm descriptor:
///   {"family": string, "eta": number, "beta": number?,
///    "oracles": [{"kind": string, "m": number, "L": number|"inf"}],
///    "custom": {"n": int, "p": int, "A": [...], "B": [...], "C": [...], "D": [...]}?}
/// Matrices in "custom" are flat row-major arrays. Recognized families:
/// gradient_descent (gd), projected_gradient (pg), nesterov, admm_gradient_form
/// (admm-g), admm_prox_form (admm-p), custom. Kinds: sector, slope_restricted,
/// smooth_strongly_convex.
struct AlgorithmDescriptor {
  AlgorithmSpec spec;
  std::vector<OracleClass> oracles;
};

/// Parses descriptor text. Throws std::invalid_argument with a descriptive
/// message on malformed JSON, unknown family/kind strings, missing required
/// fields, or inconsistent custom matrix sizes.
AlgorithmDescriptor parse_descriptor(const std::string& json_text);

/// Serializes back to canonical descriptor JSON (round-trips with parse).
std::string serialize_descriptor(const AlgorithmDescriptor& desc);

/// Builds the model with the descriptor's oracle classes attached.
AlgorithmModel build_from_descriptor(const AlgorithmDescriptor& desc);

}  // namespace ratecert
