#pragma once

#include <json.hpp>

#include "wavefront/kernel.hpp"

namespace wavefront {

/// {"form": "<name>", "params": {...}}
nlohmann::json kernel_spec_to_json(const KernelSpec& spec);
/// Throws InvalidParameter on an unknown form or missing/extra parameter.
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

}  // namespace wavefront
