#pragma once

#include <filesystem>
#include <string>

namespace wavefront {

/// Round-trip decimal text for a double ("inf"/"-inf"/"nan" for non-finite).
std::string fmt_num(double v);

/// Writes via a sibling temp file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace wavefront
