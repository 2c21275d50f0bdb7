#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pma/solution.hpp"

namespace pma {

/// Atomic text write: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("io: write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("io: rename failed for " + path.string() + ": " +
                                   ec.message());
}

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV dump: header r,phi,phi_prime,phi_second, one row per knot,
/// 17 significant digits, LF line endings.
inline void write_solution_csv(const PiecewiseSolution& sol,
                               const std::filesystem::path& path) {
  std::ostringstream os;
  os << "r,phi,phi_prime,phi_second\n";
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double phi2 = PiecewiseSolution::second_from_ode(sol.n, sol.knots[i],
                                                           sol.phi[i], sol.phi_prime[i]);
    os << format_g17(sol.knots[i]) << ',' << format_g17(sol.phi[i]) << ','
       << format_g17(sol.phi_prime[i]) << ',' << format_g17(phi2) << '\n';
  }
  write_file_atomic(path, os.str());
}

inline PiecewiseSolution read_solution_csv(const std::filesystem::path& path,
                                           Dimension n,
                                           MethodTag tag = MethodTag::reference) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open for reading: " + path.string());
  PiecewiseSolution sol(n, tag);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double r, p, dp, p2;
    char c1, c2, c3;
    if (!(ls >> r >> c1 >> p >> c2 >> dp >> c3 >> p2))
      throw std::runtime_error("io: malformed CSV row in " + path.string());
    sol.knots.push_back(r);
    sol.phi.push_back(p);
    sol.phi_prime.push_back(dp);
  }
  sol.defect.assign(sol.size(), 0.0);
  return sol;
}

}  // namespace pma
