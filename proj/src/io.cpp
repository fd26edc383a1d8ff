#include "anisofield/io.hpp"

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "anisofield/error.hpp"

namespace anisofield::io {
namespace {

static_assert(std::endian::native == std::endian::little, "AFLD1 encoding assumes a little-endian host");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("AFLD1 stream is truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

const char kMagic[8] = {'A', 'F', 'L', 'D', '1', 0, 0, 0};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::random_device rd;
  const fs::path tmp = target.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read from '" + path + "' failed");
  return os.str();
}

nlohmann::json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump_json(const nlohmann::json& doc) {
  // nlohmann prints shortest round-trip floats; the format here is fixed at %.17g.
  std::string out;
  std::function<void(const nlohmann::json&, int)> emit = [&](const nlohmann::json& j, int indent) {
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    if (j.is_object()) {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::json(item.key()).dump() + ": ";
        emit(item.value(), indent + 2);
      }
      out += "\n" + pad + "}";
    } else if (j.is_array()) {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        emit(v, indent + 2);
      }
      out += "]";
    } else if (j.is_number_float()) {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
    } else {
      out += j.dump();
    }
  };
  emit(doc, 0);
  out += "\n";
  return out;
}

std::string format_csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!have_header) {
      table.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected " << table.header.size() << " columns, found " << cells.size();
      throw ValidationError(os.str());
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(c, &pos);
      } catch (const std::logic_error&) {
        pos = std::string::npos;
      }
      if (pos != c.size()) {
        std::ostringstream os;
        os << path << ":" << lineno << ": '" << c << "' is not a number";
        throw ValidationError(os.str());
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("'" + path + "' has no header line");
  return table;
}

std::string render_csv(const std::vector<std::string>& comments, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_csv_number(r[i]);
    }
    out += "\n";
  }
  return out;
}

std::string encode_afld1(const FieldSample& fs) {
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fs.grid.dims()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fs.channels));
  put<std::uint64_t>(out, fs.seed);
  for (int j = 0; j < fs.grid.dims(); ++j) {
    put<double>(out, fs.grid.origin[j]);
    put<double>(out, fs.grid.spacing[j]);
    put<std::uint64_t>(out, fs.grid.shape[j]);
  }
  for (double v : fs.values) put<double>(out, v);
  return out;
}

std::vector<FieldSample> decode_afld1_stream(const std::string& bytes) {
  std::vector<FieldSample> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < sizeof kMagic || std::memcmp(bytes.data() + pos, kMagic, sizeof kMagic) != 0)
      throw IoError("not an AFLD1 stream (bad magic)");
    pos += sizeof kMagic;
    FieldSample fs;
    const auto dims = take<std::uint32_t>(bytes, pos);
    const auto channels = take<std::uint32_t>(bytes, pos);
    if (dims == 0 || dims > 8 || channels == 0) throw IoError("AFLD1 header has an invalid dimension or channel count");
    fs.channels = static_cast<int>(channels);
    fs.seed = take<std::uint64_t>(bytes, pos);
    for (std::uint32_t j = 0; j < dims; ++j) {
      fs.grid.origin.push_back(take<double>(bytes, pos));
      fs.grid.spacing.push_back(take<double>(bytes, pos));
      fs.grid.shape.push_back(take<std::uint64_t>(bytes, pos));
    }
    try {
      fs.grid.validate();
    } catch (const ValidationError& e) {
      throw IoError(std::string("AFLD1 grid is invalid: ") + e.what());
    }
    const std::size_t count = fs.grid.points() * channels;
    if (bytes.size() - pos < count * sizeof(double)) throw IoError("AFLD1 stream is truncated");
    fs.values.resize(count);
    std::memcpy(fs.values.data(), bytes.data() + pos, count * sizeof(double));
    pos += count * sizeof(double);
    fs.synthesis.method = "afld1";
    out.push_back(std::move(fs));
  }
  if (out.empty()) throw IoError("empty AFLD1 stream");
  return out;
}

FieldSample decode_afld1(const std::string& bytes) {
  std::vector<FieldSample> all = decode_afld1_stream(bytes);
  if (all.size() != 1) throw IoError("AFLD1 stream holds more than one record");
  return std::move(all.front());
}

}  // namespace anisofield::io
