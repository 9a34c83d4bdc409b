#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tableguard/gazetteer.hpp"
#include "tableguard/serialize.hpp"

namespace testing_support {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(TABLEGUARD_DATA_DIR) / rel;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const tableguard::Gazetteer& bundled_gazetteer() {
  static const tableguard::Gazetteer g = tableguard::Gazetteer::load(data_path("gazetteer.tsv"));
  return g;
}

inline tableguard::Gazetteer gazetteer_from(const std::string& body) {
  std::istringstream in("name\tpart\tgender\trank\tera\n" + body);
  return tableguard::Gazetteer::parse(in, "fixture");
}

inline std::string fnol_text() { return read_file(data_path("fixtures/fnol.txt")); }

inline tableguard::Policy fnol_policy() {
  return tableguard::load_policy(data_path("policies/fnol_demo.json"));
}

// Scratch directory unique to the running test binary.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tableguard-test-" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
