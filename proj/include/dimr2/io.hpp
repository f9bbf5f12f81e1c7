#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dimr2/metrics.hpp"
#include "dimr2/tensor.hpp"

namespace dimr2 {

/// Parsed array-file header: dtype tag, byte order / layout flags, shape.
/// Only little-endian 32/64-bit floats in row-major order are accepted.
struct TensorFileHeader {
  std::string dtype;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

/// Load a tensor from disk.
///
/// `.npy` files must be format version 1.0 with dtype `<f4` or `<f8` and
/// C order; 32-bit data is widened to 64-bit. `.csv` files are parsed as a
/// headered rank-2 table (UTF-8, ',' delimiter, '.' decimal). Other
/// extensions are sniffed for the array magic. Axis names are read from a
/// `<file>.axes.json` sidecar when present.
///
/// Throws IoError when the file cannot be read and FormatError (echoing the
/// offending header) for unsupported or malformed content.
Tensor load_tensor(const std::filesystem::path& path);

/// Write `.npy` format version 1.0, dtype `<f8`, C order. Output bytes are
/// identical run to run. Axis names, when present, go to the
/// `<file>.axes.json` sidecar.
void save_tensor(const Tensor& t, const std::filesystem::path& path);

enum class ExportFormat { Csv, Json };

/// Write a score map. CSV holds one row per retained index tuple with one
/// column per axis plus `score` and `degenerate`; JSON additionally embeds
/// the resolved axis/axis-norm/axis-pool sets.
void export_scoremap(const ScoreMap& map, const std::filesystem::path& path, ExportFormat format);

}  // namespace dimr2
