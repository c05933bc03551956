#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qtran/propagator.hpp"

namespace qtran {

/// t_fs,J_L_uA,J_R_uA,trace_sigma,occ_0,...
std::string csv_header(int n_orb);
/// %.12g rendering used for every float in emitted files; -0 prints as 0.
std::string format_double(double v);

void write_csv(std::ostream& os, const TraceRecord& rec);
/// Throws Error(IoError) when the file cannot be written.
void write_csv(const std::filesystem::path& path, const TraceRecord& rec);

/// Plot script that reads `csv_name` from its own directory.
std::string gnuplot_script(const std::string& csv_name);
void write_gnuplot(const std::filesystem::path& csv_path);

TraceRecord read_csv(std::istream& is);

}  // namespace qtran
