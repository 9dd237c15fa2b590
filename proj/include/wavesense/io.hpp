#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "wavesense/types.hpp"

namespace wavesense {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// m rows by m columns, '.' decimal separator, '\n' line endings.
std::string matrix_to_csv(const Mat& a);

/// 8-bit binary PGM (P5), normalized to [0, 255] over the map's own range.
/// A constant map comes out all zeros.
std::string matrix_to_pgm(const Mat& a);

/// Write via a temp file in the destination directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& data);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a, hex string; used to stamp manifests with their settings.
std::string fnv1a_hex(const std::string& data);

}  // namespace wavesense
