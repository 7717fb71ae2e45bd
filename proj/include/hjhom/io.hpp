#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hjhom {

using json = nlohmann::json;

// CSV with a header row and "%.12g" numeric formatting.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// UTF-8, two-space indent, keys in stable (sorted) order.
void write_json(const std::string& path, const json& doc);

std::string format_g(double v);

}  // namespace hjhom
