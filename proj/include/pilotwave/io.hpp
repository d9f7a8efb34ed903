#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pilotwave/config.hpp"

namespace pilotwave::io {

/// Malformed config documents and overrides (unknown key, wrong type).
class ConfigFileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Keys accepted in a config document, in output order.
const std::vector<std::string>& config_keys();

/// Flat object whose keys mirror the config field names.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

/// Starts from `base` and overwrites every key present. Does not validate.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Applies "key=value" to the config. Does not validate.
void apply_override(ExperimentConfig& config, std::string_view assignment);

/// 17 significant digits; round-trips every double.
std::string format_double(double x);

/// Comma-separated table with a one-line header. Cells are passed
/// pre-formatted; the row width must match the header.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  /// Flushes and checks the stream; throws std::runtime_error on failure.
  void close();

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::ordered_json options;
  ExperimentConfig config;
  unsigned workers = 1;
  double wall_time_s = 0;
  std::vector<std::string> outputs;
};

std::string version_string();

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace pilotwave::io
