#include "nlslab/field_io.hpp"
#include "nlslab/error.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nlslab {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string header_path_for(const std::string& csv_path) {
    auto dot = csv_path.rfind(".csv");
    if (dot != std::string::npos && dot + 4 == csv_path.size()) return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

void write_field_csv(const std::string& path, const RadialField& u) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "r,re,im\n";
    const auto& G = *u.grid;
    for (int j = 0; j < G.n; ++j)
        out << format_double(G.r[j]) << ',' << format_double(u.u[j].real()) << ','
            << format_double(u.u[j].imag()) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_field_header(const std::string& path, const FieldHeader& h) {
    json j = {{"d", h.spec.d}, {"a", h.spec.a}, {"alpha", h.spec.alpha}, {"mu", h.spec.mu},
              {"N", h.n},      {"R_max", h.rmax}, {"t", h.t}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
}

void write_field(const std::string& csv_path, const RadialField& u, const ProblemSpec& spec, double t) {
    write_field_csv(csv_path, u);
    FieldHeader h{spec, u.grid->n, u.grid->rmax, t};
    write_field_header(header_path_for(csv_path), h);
}

FieldHeader read_field_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    json j;
    try {
        in >> j;
        FieldHeader h;
        h.spec.d = j.at("d").get<int>();
        h.spec.a = j.at("a").get<double>();
        h.spec.alpha = j.at("alpha").get<double>();
        h.spec.mu = j.at("mu").get<int>();
        h.n = j.at("N").get<int>();
        h.rmax = j.at("R_max").get<double>();
        h.t = j.value("t", 0.0);
        return h;
    } catch (const json::exception& e) {
        throw ConfigError("bad field header " + path + ": " + e.what());
    }
}

RadialField read_field_csv(const std::string& path, const GridPtr& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    std::getline(in, line);
    RadialField u(grid);
    int j = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (j >= grid->n) throw ConfigError(path + ": more rows than grid nodes");
        const char* p = line.c_str();
        char* end = nullptr;
        double r = std::strtod(p, &end);
        if (*end != ',') throw ConfigError(path + ": malformed row " + std::to_string(j + 2));
        double re = std::strtod(end + 1, &end);
        if (*end != ',') throw ConfigError(path + ": malformed row " + std::to_string(j + 2));
        double im = std::strtod(end + 1, &end);
        if (std::abs(r - grid->r[j]) > 1e-12 * grid->rmax)
            throw ConfigError(path + ": node " + std::to_string(j) + " does not match the grid");
        u.u[j] = cplx(re, im);
        ++j;
    }
    if (j != grid->n) throw ConfigError(path + ": expected " + std::to_string(grid->n) + " rows");
    return u;
}

RadialField read_field(const std::string& csv_path, FieldHeader* header) {
    FieldHeader h = read_field_header(header_path_for(csv_path));
    auto grid = make_grid(h.spec.d, h.n, h.rmax);
    if (header) *header = h;
    return read_field_csv(csv_path, grid);
}

} // namespace nlslab
