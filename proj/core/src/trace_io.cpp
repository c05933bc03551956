#include "qtran/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtran/error.hpp"

namespace qtran {

std::string csv_header(int n_orb) {
  std::string h = "t_fs,J_L_uA,J_R_uA,trace_sigma";
  for (int i = 0; i < n_orb; ++i) h += ",occ_" + std::to_string(i);
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_csv(std::ostream& os, const TraceRecord& rec) {
  const int n_orb = static_cast<int>(rec.occupations.size());
  os << csv_header(n_orb) << '\n';
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << format_double(rec.times[i]) << ',' << format_double(rec.j_L[i]) << ',' << format_double(rec.j_R[i]) << ','
       << format_double(rec.trace_sigma[i]);
    for (int k = 0; k < n_orb; ++k) os << ',' << format_double(rec.occupations[k][i]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const TraceRecord& rec) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  write_csv(os, rec);
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string gnuplot_script(const std::string& csv_name) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 't (fs)'\n"
    << "set ylabel 'J (uA)'\n"
    << "plot '" << csv_name << "' using 1:2 with lines, '' using 1:3 with lines\n";
  return s.str();
}

void write_gnuplot(const std::filesystem::path& csv_path) {
  std::filesystem::path gp = csv_path;
  gp.replace_extension(".gp");
  std::ofstream os(gp);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + gp.string() + " for writing");
  os << gnuplot_script(csv_path.filename().string());
}

TraceRecord read_csv(std::istream& is) {
  TraceRecord rec;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::IoError, "empty trace file");
  int cols = 1;
  for (char c : line) cols += c == ',';
  if (cols < 4 || line.rfind("t_fs,J_L_uA,J_R_uA,trace_sigma", 0) != 0) {
    throw Error(ErrorKind::IoError, "unexpected trace header: " + line);
  }
  rec.occupations.resize(cols - 4);
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::IoError, "bad number on row " + std::to_string(row) + ": " + cell);
      }
    }
    if (static_cast<int>(v.size()) != cols) {
      throw Error(ErrorKind::IoError, "row " + std::to_string(row) + " has " + std::to_string(v.size()) + " columns");
    }
    rec.times.push_back(v[0]);
    rec.j_L.push_back(v[1]);
    rec.j_R.push_back(v[2]);
    rec.trace_sigma.push_back(v[3]);
    for (int k = 0; k + 4 < cols; ++k) rec.occupations[k].push_back(v[4 + k]);
  }
  return rec;
}

}  // namespace qtran
