#pragma once

// CSV emission. Floating-point columns carry 17 significant decimal
// digits so profiles round-trip through text exactly.

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chsurf {

namespace detail {
inline void csv_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}
}  // namespace detail

inline void write_profile_csv(std::ostream& os, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& psi) {
  os << "x,phi,psi\n";
  std::string line;
  for (int i = 0; i < x.size(); ++i) {
    line.clear();
    detail::csv_number(line, x[i]);
    line += ',';
    detail::csv_number(line, phi[i]);
    line += ',';
    detail::csv_number(line, psi[i]);
    line += '\n';
    os << line;
  }
}

struct ProfileData {
  Eigen::VectorXd x, phi, psi;
};

inline ProfileData read_profile_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "x,phi,psi")
    throw std::runtime_error("profile CSV: bad header");
  std::vector<double> x, phi, psi;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
      throw std::runtime_error("profile CSV: bad row '" + line + "'");
    x.push_back(a);
    phi.push_back(b);
    psi.push_back(c);
  }
  ProfileData d;
  d.x = Eigen::Map<Eigen::VectorXd>(x.data(), x.size());
  d.phi = Eigen::Map<Eigen::VectorXd>(phi.data(), phi.size());
  d.psi = Eigen::Map<Eigen::VectorXd>(psi.data(), psi.size());
  return d;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

}  // namespace chsurf
