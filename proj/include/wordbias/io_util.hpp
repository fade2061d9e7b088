#pragma once

#include <string>

namespace wordbias {

/// Writes content to a sibling temp file, then renames over the target so
/// readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace wordbias
