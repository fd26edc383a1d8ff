#pragma once

#include <string>
#include <vector>

#include "anisofield/simulation.hpp"
#include "json.hpp"

namespace anisofield::io {

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);
nlohmann::json read_json(const std::string& path);

/// 17 significant digits, two-space indent.
std::string dump_json(const nlohmann::json& doc);

/// %.10g
std::string format_csv_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numeric CSV with one header line. Lines starting with '#' and blank lines
/// are skipped.
CsvTable read_csv(const std::string& path);

/// '#'-prefixed metadata lines, header, rows.
std::string render_csv(const std::vector<std::string>& comments, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

/// Binary field: "AFLD1\0\0\0", u32 N, u32 p, u64 seed, per axis (f64 origin,
/// f64 spacing, u64 shape), then p * points f64 values, channel-major and
/// row-major within a channel. Little-endian throughout. Several
/// realizations are written as consecutive records.
std::string encode_afld1(const FieldSample& fs);
std::vector<FieldSample> decode_afld1_stream(const std::string& bytes);
/// Exactly one record.
FieldSample decode_afld1(const std::string& bytes);

}  // namespace anisofield::io
