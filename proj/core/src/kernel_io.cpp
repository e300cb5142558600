#include "tme/kernel_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tme/csv_io.hpp"

namespace tme {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

JointSpectralAmplitude read_kernel(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw std::runtime_error("kernel file is empty");
  const auto head = tokens(line);
  if (head.size() != 4) {
    throw std::runtime_error(
        "kernel header must be 'n_signal n_idler half_width_signal half_width_idler'");
  }
  const long long ns = parse_integer(head[0]);
  const long long ni = parse_integer(head[1]);
  if (ns <= 0 || ni <= 0) throw std::runtime_error("kernel dimensions must be positive");
  const auto gs = make_grid(static_cast<std::size_t>(ns), parse_double(head[2]));
  const auto gi = make_grid(static_cast<std::size_t>(ni), parse_double(head[3]));

  CMatrix values(ns, ni);
  for (long long i = 0; i < ns; ++i) {
    for (long long j = 0; j < ni; ++j) {
      if (!next_content_line(in, line)) {
        throw std::runtime_error("kernel file ends early at entry " +
                                 std::to_string(i * ni + j));
      }
      const auto t = tokens(line);
      if (t.size() != 2) {
        throw std::runtime_error("kernel entry line must be 're im': '" + line + "'");
      }
      values(i, j) = cplx(parse_double(t[0]), parse_double(t[1]));
    }
  }
  if (next_content_line(in, line)) throw std::runtime_error("kernel file has trailing data");
  return build_custom_jsf(gs, gi, values);
}

JointSpectralAmplitude read_kernel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel file " + path.string());
  return read_kernel(in);
}

void write_kernel(std::ostream& out, const JointSpectralAmplitude& jsa) {
  const auto& gs = jsa.signal_grid();
  const auto& gi = jsa.idler_grid();
  out << gs.n_points() << ' ' << gi.n_points() << ' ' << format_double(gs.half_width())
      << ' ' << format_double(gi.half_width()) << '\n';
  for (Eigen::Index i = 0; i < jsa.values().rows(); ++i) {
    for (Eigen::Index j = 0; j < jsa.values().cols(); ++j) {
      const cplx v = jsa.scale_G() * jsa.values()(i, j);
      out << format_double(v.real()) << ' ' << format_double(v.imag()) << '\n';
    }
  }
}

void write_kernel_file(const std::filesystem::path& path, const JointSpectralAmplitude& jsa) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write kernel file " + path.string());
  write_kernel(out, jsa);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tme
