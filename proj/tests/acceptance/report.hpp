#pragma once

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

namespace amortize::acceptance {

/// Prints the single verdict line of a criterion and records it with doctest.
inline void verdict(int criterion, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " (" << title << "): " << detail << std::endl;
  CHECK_MESSAGE(pass, "criterion ", criterion, " failed: ", detail);
}

/// Extra context below a verdict, indented so verdict lines stay greppable.
inline void note(const std::string& text) { std::cout << "    " << text << std::endl; }

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Models shared between the setup and criterion runs live here.
inline std::filesystem::path artifact_dir() {
  std::filesystem::path dir = AMORTIZE_ACCEPTANCE_DIR;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string artifact(const std::string& name) { return (artifact_dir() / name).string(); }

template <class... Ts>
std::string str(const Ts&... parts) {
  std::ostringstream out;
  out.precision(4);
  (out << ... << parts);
  return out.str();
}

}  // namespace amortize::acceptance
