#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/simulate.hpp"

inline std::string binary_path() {
  const char* bin = std::getenv("FQUANT_BIN");
  if (!bin) throw std::runtime_error("FQUANT_BIN not set");
  return bin;
}

struct CliWorkspace {
  std::filesystem::path dir;

  CliWorkspace() {
    dir = std::filesystem::temp_directory_path() /
          ("fquant_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    std::filesystem::create_directories(dir);
  }
  ~CliWorkspace() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  // runs the binary with the given argument string, returns the exit code
  int run(const std::string& args) const {
    std::string cmd = binary_path() + " " + args + " >" + (dir / "stdout.txt").string() +
                      " 2>" + (dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
  }

private:
  static int& counter() {
    static int c = 0;
    return c;
  }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace testutil_cli {

inline fquant::Curve wiggly_curve(fquant::Rng& rng, int points = 24) {
  std::vector<double> v(points);
  double a = 2.0 * rng.uniform01() - 1.0;
  double b = 2.0 * rng.uniform01() - 1.0;
  for (int j = 0; j < points; ++j) {
    double s = (j + 1.0) / points;
    v[j] = a * std::sin(2.0 * M_PI * s) + b * std::cos(2.0 * M_PI * s) +
           0.3 * rng.uniform01();
  }
  return fquant::Curve::on_hours(std::move(v));
}

}  // namespace testutil_cli
