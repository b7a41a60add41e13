#pragma once

#include <string>

namespace slcd {

/// Whole-file read; throws IoError when the file cannot be opened.
std::string read_text_file(const std::string& path);

/// Write-temp-then-rename so readers never observe partial files.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace slcd
