// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace xden::detail {

using json = nlohmann::json;

// Parse failures and missing/badly typed fields throw ValidationError with
// the file path (when known) in the message.
json parse_json_text(const std::string& text, const std::string& origin);
json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

std::string read_file_text(const std::string& path);
void write_file_text(const std::string& path, const std::string& text);

const json& require_field(const json& doc, const char* key, const std::string& origin);
std::string require_string(const json& doc, const char* key, const std::string& origin);
double require_number(const json& doc, const char* key, const std::string& origin);
std::int64_t require_int(const json& doc, const char* key, const std::string& origin);
const json& require_array(const json& doc, const char* key, std::size_t size,
                          const std::string& origin);

// Raw sidecar payloads, little-endian on disk regardless of host order.
std::vector<std::uint16_t> read_raw_u16(const std::string& path, std::size_t count);
std::vector<float> read_raw_f32(const std::string& path, std::size_t count);
void write_raw_u16(const std::string& path, const std::vector<std::uint16_t>& data);
void write_raw_f32(const std::string& path, const std::vector<float>& data);

// "name.lvol.json" -> "name.lvol.raw"; requires the ".json" suffix.
std::string sidecar_raw_path(const std::string& json_path);

}  // namespace xden::detail
