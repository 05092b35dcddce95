#pragma once

#include "nlslab/grid.hpp"
#include "nlslab/params.hpp"

#include <string>

namespace nlslab {

struct FieldHeader {
    ProblemSpec spec;
    int n = 0;
    double rmax = 0;
    double t = 0;
};

// CSV columns r, re, im with %.17g so that a write/read cycle is exact.
void write_field_csv(const std::string& path, const RadialField& u);
void write_field_header(const std::string& path, const FieldHeader& h);
void write_field(const std::string& csv_path, const RadialField& u, const ProblemSpec& spec, double t);

FieldHeader read_field_header(const std::string& path);
// Reads a CSV written by write_field_csv. The node positions must match the grid.
RadialField read_field_csv(const std::string& path, const GridPtr& grid);
// Reads CSV plus its sibling header (path with .csv replaced by .json) and rebuilds the grid.
RadialField read_field(const std::string& csv_path, FieldHeader* header = nullptr);

std::string header_path_for(const std::string& csv_path);
std::string format_double(double x);

} // namespace nlslab
