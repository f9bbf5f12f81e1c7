#include "dimr2/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dimr2 {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading '" + path.string() + "'");
  return std::move(buffer).str();
}

// Extract the value following 'key': in the literal header map.
std::string header_value(const std::string& header, const std::string& key) {
  const std::string quoted = "'" + key + "'";
  std::size_t pos = header.find(quoted);
  if (pos == std::string::npos) {
    throw FormatError("array header is missing '" + key + "': " + header);
  }
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string::npos) throw FormatError("malformed array header: " + header);
  ++pos;
  while (pos < header.size() && (header[pos] == ' ' || header[pos] == '\t')) ++pos;
  std::size_t end = pos;
  if (pos < header.size() && header[pos] == '\'') {
    end = header.find('\'', pos + 1);
    if (end == std::string::npos) throw FormatError("malformed array header: " + header);
    return header.substr(pos + 1, end - pos - 1);
  }
  if (pos < header.size() && header[pos] == '(') {
    end = header.find(')', pos);
    if (end == std::string::npos) throw FormatError("malformed array header: " + header);
    return header.substr(pos, end - pos + 1);
  }
  while (end < header.size() && header[end] != ',' && header[end] != '}') ++end;
  std::string value = header.substr(pos, end - pos);
  while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
  return value;
}

std::vector<std::size_t> parse_shape_tuple(const std::string& tuple, const std::string& header) {
  std::vector<std::size_t> shape;
  std::size_t pos = 1;  // skip '('
  while (pos < tuple.size() && tuple[pos] != ')') {
    while (pos < tuple.size() && (tuple[pos] == ' ' || tuple[pos] == ',')) ++pos;
    if (pos >= tuple.size() || tuple[pos] == ')') break;
    std::size_t value = 0;
    const char* begin = tuple.data() + pos;
    const char* end = tuple.data() + tuple.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) {
      throw FormatError("malformed shape tuple in array header: " + header);
    }
    shape.push_back(value);
    pos = static_cast<std::size_t>(ptr - tuple.data());
  }
  return shape;
}

TensorFileHeader parse_npy_header(const std::string& header) {
  TensorFileHeader parsed;
  parsed.dtype = header_value(header, "descr");
  const std::string order = header_value(header, "fortran_order");
  if (order == "True") {
    parsed.fortran_order = true;
  } else if (order == "False") {
    parsed.fortran_order = false;
  } else {
    throw FormatError("malformed fortran_order in array header: " + header);
  }
  parsed.shape = parse_shape_tuple(header_value(header, "shape"), header);
  return parsed;
}

Tensor load_npy(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("'" + path.string() + "' is not an npy array file");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw FormatError("unsupported npy version " + std::to_string(major) + "." +
                      std::to_string(minor) + " (only 1.0 accepted)");
  }
  std::uint16_t header_len = 0;
  std::memcpy(&header_len, bytes.data() + 8, 2);
  if (bytes.size() < 10u + header_len) throw FormatError("truncated npy header");
  const std::string header = bytes.substr(10, header_len);

  const TensorFileHeader parsed = parse_npy_header(header);
  if (parsed.fortran_order) {
    throw FormatError("Fortran-order arrays are not supported: " + header);
  }
  std::size_t item_size = 0;
  if (parsed.dtype == "<f8") {
    item_size = 8;
  } else if (parsed.dtype == "<f4") {
    item_size = 4;
  } else {
    throw FormatError("unsupported dtype '" + parsed.dtype +
                      "' (only little-endian <f4/<f8): " + header);
  }
  std::size_t count = 1;
  for (std::size_t e : parsed.shape) {
    if (e == 0) throw FormatError("zero extent in array shape: " + header);
    count *= e;
  }

  const std::size_t payload_off = 10u + header_len;
  const std::size_t expected = count * item_size;
  if (bytes.size() - payload_off < expected) {
    throw FormatError("truncated npy payload in '" + path.string() + "': expected " +
                      std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size() - payload_off));
  }
  if (bytes.size() - payload_off > expected) {
    throw FormatError("trailing bytes after npy payload in '" + path.string() + "'");
  }

  std::vector<double> data(count);
  if (item_size == 8) {
    std::memcpy(data.data(), bytes.data() + payload_off, expected);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float v = 0.0f;
      std::memcpy(&v, bytes.data() + payload_off + 4 * i, 4);
      data[i] = static_cast<double>(v);
    }
  }
  return Tensor(parsed.shape, std::move(data));
}

Tensor load_csv(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string::npos) end = bytes.size();
    std::string line = bytes.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    if (end == bytes.size()) break;
    start = end + 1;
  }
  if (lines.size() < 2) {
    throw FormatError("csv '" + path.string() + "' needs a header line and at least one data row");
  }

  const auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    return fields;
  };

  const std::size_t n_cols = split(lines[0]).size();
  const std::size_t n_rows = lines.size() - 1;
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r]);
    if (fields.size() != n_cols) {
      throw FormatError("csv row " + std::to_string(r + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(n_cols));
    }
    for (const auto& field : fields) {
      double value = 0.0;
      const char* begin = field.data();
      const char* end = field.data() + field.size();
      while (begin < end && *begin == ' ') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end) {
        throw FormatError("csv row " + std::to_string(r + 1) + ": cannot parse '" + field +
                          "' as a number");
      }
      data.push_back(value);
    }
  }
  return Tensor({n_rows, n_cols}, std::move(data));
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".axes.json");
}

Tensor apply_sidecar_names(Tensor t, const std::filesystem::path& path) {
  const auto sidecar = sidecar_path(path);
  std::error_code ec;
  if (!std::filesystem::exists(sidecar, ec)) return t;
  const std::string bytes = read_file_bytes(sidecar);
  nlohmann::json j = nlohmann::json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw FormatError("axis sidecar '" + sidecar.string() + "' must be a JSON array of names");
  }
  Tensor::Names names;
  for (const auto& item : j) {
    if (!item.is_string()) {
      throw FormatError("axis sidecar '" + sidecar.string() + "' must contain strings");
    }
    names.push_back(item.get<std::string>());
  }
  if (names.size() != t.rank()) {
    throw FormatError("axis sidecar '" + sidecar.string() + "' names " +
                      std::to_string(names.size()) + " axes, tensor has rank " +
                      std::to_string(t.rank()));
  }
  return t.with_names(std::move(names));
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Tensor load_tensor(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw IoError("no such file: '" + path.string() + "'");
  const std::string ext = path.extension().string();
  Tensor t;
  if (ext == ".npy") {
    t = load_npy(path);
  } else if (ext == ".csv") {
    t = load_csv(path);
  } else {
    // Sniff for the array magic; anything else is unsupported.
    std::ifstream probe(path, std::ios::binary);
    char head[6] = {};
    probe.read(head, 6);
    if (probe.gcount() == 6 && std::memcmp(head, kMagic, 6) == 0) {
      t = load_npy(path);
    } else {
      throw FormatError("unsupported file type for '" + path.string() +
                        "' (expected .npy or .csv)");
    }
  }
  return apply_sidecar_names(std::move(t), path);
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
  std::string shape_str;
  if (t.rank() == 0) {
    shape_str = "()";
  } else if (t.rank() == 1) {
    shape_str = "(" + std::to_string(t.shape()[0]) + ",)";
  } else {
    shape_str = "(";
    for (std::size_t d = 0; d < t.rank(); ++d) {
      if (d) shape_str += ", ";
      shape_str += std::to_string(t.shape()[d]);
    }
    shape_str += ")";
  }
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " + shape_str + ", }";
  // Pad so the full preamble is a multiple of 64 bytes, newline-terminated.
  const std::size_t base = 10 + header.size() + 1;
  header.append((64 - base % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  const char version[2] = {1, 0};
  out.write(version, 2);
  const auto header_len = static_cast<std::uint16_t>(header.size());
  out.write(reinterpret_cast<const char*>(&header_len), 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!out.good()) throw IoError("failed writing '" + path.string() + "'");
  out.close();

  const auto sidecar = sidecar_path(path);
  if (t.has_names()) {
    std::ofstream names_out(sidecar, std::ios::trunc);
    if (!names_out) throw IoError("cannot open '" + sidecar.string() + "' for writing");
    names_out << nlohmann::json(t.names()).dump() << "\n";
    if (!names_out.good()) throw IoError("failed writing '" + sidecar.string() + "'");
  } else {
    std::error_code ec;
    std::filesystem::remove(sidecar, ec);
  }
}

void export_scoremap(const ScoreMap& map, const std::filesystem::path& path, ExportFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

  const Tensor& scores = map.scores;
  Tensor::Names labels = scores.names();
  if (labels.empty()) {
    for (std::size_t d = 0; d < scores.rank(); ++d) labels.push_back("axis" + std::to_string(d));
  }

  if (format == ExportFormat::Csv) {
    for (std::size_t d = 0; d < scores.rank(); ++d) out << labels[d] << ",";
    out << "score,degenerate\n";
    std::vector<std::size_t> index(scores.rank(), 0);
    for (std::size_t flat = 0; flat < scores.size(); ++flat) {
      for (std::size_t d = 0; d < scores.rank(); ++d) out << index[d] << ",";
      out << format_g17(scores.at_flat(flat)) << ","
          << (map.degenerate_mask.at_flat(flat) != 0.0 ? 1 : 0) << "\n";
      for (std::size_t d = scores.rank(); d-- > 0;) {
        if (++index[d] < scores.shape()[d]) break;
        index[d] = 0;
      }
    }
  } else {
    nlohmann::json j;
    j["metric"] = map.metric_name;
    j["shape"] = scores.shape();
    j["axes"] = labels;
    j["spec"] = {
        {"axis", map.spec.axis.indices()},
        {"axis_norm", map.spec.axis_norm.indices()},
        {"axis_pool", map.spec.axis_pool.indices()},
    };
    if (!map.spec.names.empty()) {
      j["spec"]["axis_names"] = map.spec.axis_labels(map.spec.axis);
      j["spec"]["axis_norm_names"] = map.spec.axis_labels(map.spec.axis_norm);
      j["spec"]["axis_pool_names"] = map.spec.axis_labels(map.spec.axis_pool);
    }
    j["scores"] = std::vector<double>(scores.data().begin(), scores.data().end());
    std::vector<int> degenerate(map.degenerate_mask.size());
    for (std::size_t i = 0; i < degenerate.size(); ++i) {
      degenerate[i] = map.degenerate_mask.at_flat(i) != 0.0 ? 1 : 0;
    }
    j["degenerate"] = degenerate;
    out << j.dump(2) << "\n";
  }
  if (!out.good()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace dimr2
