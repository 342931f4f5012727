#pragma once

#include <cstdlib>
#include <string>

// Shared by the test binaries: where the shipped data files live.
inline std::string data_dir() {
  if (const char* env = std::getenv("OPILEX_DATA_DIR")) return env;
  return "data";
}
