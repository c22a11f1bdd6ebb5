#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "prodcheck/parser.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(PRODCHECK_FIXTURES_DIR) + "/" + name + ".prodspec";
}

inline prodcheck::SpecFile load_fixture(const std::string& name) {
  return prodcheck::parse_spec(read_file(fixture_path(name)));
}

inline std::string golden_path(const std::string& name) {
  return std::string(PRODCHECK_FIXTURES_DIR) + "/golden/" + name + ".csrs";
}

}  // namespace testutil
