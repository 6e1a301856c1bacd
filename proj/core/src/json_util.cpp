// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "json_util.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "fmt.hpp"
#include "xden/errors.hpp"

namespace xden::detail {

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt("%s: %s", origin.c_str(), e.what()));
  }
}

json parse_json_file(const std::string& path) {
  return parse_json_text(read_file_text(path), path);
}

void write_json_file(const std::string& path, const json& doc) {
  write_file_text(path, doc.dump(2) + "\n");
}

std::string read_file_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt("cannot open %s", path.c_str()));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ValidationError(fmt("read failed on %s", path.c_str()));
  return text;
}

void write_file_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(fmt("cannot open %s for writing", path.c_str()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ValidationError(fmt("write failed on %s", path.c_str()));
}

const json& require_field(const json& doc, const char* key, const std::string& origin) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ValidationError(fmt("%s: missing field \"%s\"", origin.c_str(), key));
  }
  return doc.at(key);
}

std::string require_string(const json& doc, const char* key, const std::string& origin) {
  const json& v = require_field(doc, key, origin);
  if (!v.is_string()) {
    throw ValidationError(fmt("%s: field \"%s\" must be a string", origin.c_str(), key));
  }
  return v.get<std::string>();
}

double require_number(const json& doc, const char* key, const std::string& origin) {
  const json& v = require_field(doc, key, origin);
  if (!v.is_number()) {
    throw ValidationError(fmt("%s: field \"%s\" must be a number", origin.c_str(), key));
  }
  return v.get<double>();
}

std::int64_t require_int(const json& doc, const char* key, const std::string& origin) {
  const json& v = require_field(doc, key, origin);
  if (!v.is_number_integer()) {
    throw ValidationError(fmt("%s: field \"%s\" must be an integer", origin.c_str(), key));
  }
  return v.get<std::int64_t>();
}

const json& require_array(const json& doc, const char* key, std::size_t size,
                          const std::string& origin) {
  const json& v = require_field(doc, key, origin);
  if (!v.is_array() || (size != 0 && v.size() != size)) {
    throw ValidationError(
        fmt("%s: field \"%s\" must be an array of %zu elements", origin.c_str(), key, size));
  }
  return v;
}

namespace {

std::vector<unsigned char> read_file_bytes(const std::string& path, std::size_t expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt("cannot open %s", path.c_str()));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw ValidationError(fmt("read failed on %s", path.c_str()));
  if (bytes.size() != expect) {
    throw ShapeError(fmt("%s: expected %zu bytes, found %zu", path.c_str(), expect, bytes.size()));
  }
  return bytes;
}

void write_file_bytes(const std::string& path, const unsigned char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(fmt("cannot open %s for writing", path.c_str()));
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw ValidationError(fmt("write failed on %s", path.c_str()));
}

constexpr bool kLittleEndian = std::endian::native == std::endian::little;

}  // namespace

std::vector<std::uint16_t> read_raw_u16(const std::string& path, std::size_t count) {
  const auto bytes = read_file_bytes(path, count * 2);
  std::vector<std::uint16_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
  }
  return out;
}

std::vector<float> read_raw_f32(const std::string& path, std::size_t count) {
  const auto bytes = read_file_bytes(path, count * 4);
  std::vector<float> out(count);
  if (kLittleEndian) {
    std::memcpy(out.data(), bytes.data(), bytes.size());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t w = bytes[4 * i] | (bytes[4 * i + 1] << 8) | (bytes[4 * i + 2] << 16) |
                        (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
      std::memcpy(&out[i], &w, 4);
    }
  }
  return out;
}

void write_raw_u16(const std::string& path, const std::vector<std::uint16_t>& data) {
  std::vector<unsigned char> bytes(data.size() * 2);
  for (std::size_t i = 0; i < data.size(); ++i) {
    bytes[2 * i] = static_cast<unsigned char>(data[i] & 0xff);
    bytes[2 * i + 1] = static_cast<unsigned char>(data[i] >> 8);
  }
  write_file_bytes(path, bytes.data(), bytes.size());
}

void write_raw_f32(const std::string& path, const std::vector<float>& data) {
  if (kLittleEndian) {
    write_file_bytes(path, reinterpret_cast<const unsigned char*>(data.data()), data.size() * 4);
    return;
  }
  std::vector<unsigned char> bytes(data.size() * 4);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t w = 0;
    std::memcpy(&w, &data[i], 4);
    bytes[4 * i] = static_cast<unsigned char>(w & 0xff);
    bytes[4 * i + 1] = static_cast<unsigned char>((w >> 8) & 0xff);
    bytes[4 * i + 2] = static_cast<unsigned char>((w >> 16) & 0xff);
    bytes[4 * i + 3] = static_cast<unsigned char>(w >> 24);
  }
  write_file_bytes(path, bytes.data(), bytes.size());
}

std::string sidecar_raw_path(const std::string& json_path) {
  constexpr const char* suffix = ".json";
  const std::size_t n = std::strlen(suffix);
  if (json_path.size() <= n || json_path.substr(json_path.size() - n) != suffix) {
    throw ValidationError(fmt("%s: expected a .json path", json_path.c_str()));
  }
  return json_path.substr(0, json_path.size() - n) + ".raw";
}

}  // namespace xden::detail
