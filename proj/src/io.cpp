#include "pilotwave/io.hpp"

#include <charconv>
#include <functional>
#include <system_error>

#include <fmt/format.h>

#ifndef PILOTWAVE_VERSION
#define PILOTWAVE_VERSION "unknown"
#endif

namespace pilotwave::io {

namespace {

struct DoubleField {
  const char* key;
  std::function<double&(ExperimentConfig&)> get;
};

const std::vector<DoubleField>& double_fields() {
  static const std::vector<DoubleField> fields = {
      {"hbar", [](ExperimentConfig& c) -> double& { return c.physical.hbar; }},
      {"mass", [](ExperimentConfig& c) -> double& { return c.physical.mass; }},
      {"sigma0", [](ExperimentConfig& c) -> double& { return c.physical.sigma0; }},
      {"u", [](ExperimentConfig& c) -> double& { return c.physical.u; }},
      {"delta", [](ExperimentConfig& c) -> double& { return c.physical.delta; }},
      {"delta_prime", [](ExperimentConfig& c) -> double& { return c.physical.delta_prime; }},
      {"t_coil", [](ExperimentConfig& c) -> double& { return c.schedule.t_coil; }},
      {"t1", [](ExperimentConfig& c) -> double& { return c.schedule.t1; }},
      {"t2", [](ExperimentConfig& c) -> double& { return c.schedule.t2; }},
      {"t3", [](ExperimentConfig& c) -> double& { return c.schedule.t3; }},
      {"t4", [](ExperimentConfig& c) -> double& { return c.schedule.t4; }},
      {"t_end", [](ExperimentConfig& c) -> double& { return c.schedule.t_end; }},
      {"dt", [](ExperimentConfig& c) -> double& { return c.schedule.dt; }},
      {"min_gap_ratio", [](ExperimentConfig& c) -> double& { return c.schedule.min_gap_ratio; }},
      {"alpha", [](ExperimentConfig& c) -> double& { return c.alpha; }},
      {"beta", [](ExperimentConfig& c) -> double& { return c.beta; }},
  };
  return fields;
}

const DoubleField* find_double(std::string_view key) {
  for (const auto& f : double_fields())
    if (key == f.key) return &f;
  return nullptr;
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigFileError(fmt::format("{}: not a number: '{}'", key, text));
  return v;
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigFileError(fmt::format("seed: not an unsigned integer: '{}'", text));
  return v;
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : double_fields()) k.emplace_back(f.key);
    k.emplace_back("seed");
    return k;
  }();
  return keys;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  auto copy = config;
  for (const auto& f : double_fields()) doc[f.key] = f.get(copy);
  doc["seed"] = config.seed;
  return doc;
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base) {
  if (!doc.is_object()) throw ConfigFileError("config document must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned())
        throw ConfigFileError("seed: expected a non-negative integer");
      base.seed = value.get<std::uint64_t>();
      continue;
    }
    const auto* field = find_double(key);
    if (!field) throw ConfigFileError(fmt::format("unknown config key '{}'", key));
    if (!value.is_number()) throw ConfigFileError(fmt::format("{}: expected a number", key));
    field->get(base) = value.get<double>();
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigFileError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return config_from_json(doc, base);
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigFileError(fmt::format("override must be key=value: '{}'", assignment));
  const auto key = assignment.substr(0, eq);
  const auto text = assignment.substr(eq + 1);
  if (key == "seed") {
    config.seed = parse_seed(text);
    return;
  }
  const auto* field = find_double(key);
  if (!field) throw ConfigFileError(fmt::format("unknown config key '{}'", key));
  field->get(config) = parse_double(key, text);
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out_ << fmt::format("{}\n", fmt::join(header, ","));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error(fmt::format("{}: row has {} cells, header has {}", path_.string(),
                                       cells.size(), columns_));
  out_ << fmt::format("{}\n", fmt::join(cells, ","));
  ++rows_;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error(fmt::format("write failed for '{}'", path_.string()));
  out_.close();
}

std::string version_string() { return PILOTWAVE_VERSION; }

nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json doc;
  doc["command"] = m.command;
  doc["version"] = version_string();
  doc["seed"] = m.config.seed;
  doc["workers"] = m.workers;
  doc["wall_time_s"] = m.wall_time_s;
  doc["config_digest"] = config_digest(m.config);
  doc["config"] = config_to_json(m.config);
  doc["options"] = m.options;
  doc["outputs"] = m.outputs;
  return doc;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

} // namespace pilotwave::io
