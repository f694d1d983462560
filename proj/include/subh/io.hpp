#pragma once

// "hfield v1" map/section serialization: a UTF-8 header line
//   hfield v1 n=<n> nu=<nu> dims=<d0,d1,...> extent=<L0,L1,...>
// followed by one whitespace-separated row of component values per grid
// point, in storage order (axis-major, last axis fastest), 17 significant
// digits.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"

namespace subh {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_hfield(std::ostream& os, const BaseGrid& g, const MapField& phi) {
    os << "hfield v1 n=" << g.model.n << " nu=" << phi.ncomp << " dims=";
    for (std::size_t i = 0; i < g.lat.dims.size(); ++i)
        os << (i ? "," : "") << g.lat.dims[i];
    os << " extent=";
    for (std::size_t i = 0; i < g.lat.dims.size(); ++i)
        os << (i ? "," : "") << format_g17(g.extent);
    os << "\n";
    const std::size_t npts = g.size();
    for (std::size_t i = 0; i < npts; ++i) {
        for (int c = 0; c < phi.ncomp; ++c)
            os << (c ? " " : "") << format_g17(phi.at(i, c));
        os << "\n";
    }
}

inline void write_hfield(const std::string& path, const BaseGrid& g, const MapField& phi) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_hfield(os, g, phi);
}

namespace detail {
inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') { out.push_back(cur); cur.clear(); }
        else cur.push_back(ch);
    }
    out.push_back(cur);
    return out;
}
inline std::string header_value(const std::string& header, const std::string& key) {
    const std::string tag = key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos)
        throw std::runtime_error("hfield header missing '" + key + "='");
    auto end = header.find(' ', pos);
    if (end == std::string::npos) end = header.size();
    return header.substr(pos + tag.size(), end - pos - tag.size());
}
}  // namespace detail

struct HField {
    BaseGrid grid;
    MapField map;
};

inline HField read_hfield(std::istream& is, int fd_order = 4) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("empty hfield stream");
    if (header.rfind("hfield v1 ", 0) != 0)
        throw std::runtime_error("not an hfield v1 stream");
    const int n = std::stoi(detail::header_value(header, "n"));
    const int nu = std::stoi(detail::header_value(header, "nu"));
    const auto dims = detail::split_csv(detail::header_value(header, "dims"));
    const auto exts = detail::split_csv(detail::header_value(header, "extent"));
    if (static_cast<int>(dims.size()) != 2 * n + 1 || exts.size() != dims.size())
        throw std::runtime_error("hfield header dims/extent inconsistent with n");
    const int npts = std::stoi(dims[0]);
    const double L = std::stod(exts[0]);
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (std::stoi(dims[i]) != npts || std::stod(exts[i]) != L)
            throw std::runtime_error("only uniform dims/extent are supported");
    HField out{BaseGrid(HeisenbergModel{n}, npts, L, fd_order), MapField()};
    out.map = MapField(out.grid, nu);
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        for (int c = 0; c < nu; ++c)
            if (!(is >> out.map.at(i, c)))
                throw std::runtime_error("hfield data truncated at point " + std::to_string(i));
    return out;
}

inline HField read_hfield(const std::string& path, int fd_order = 4) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_hfield(is, fd_order);
}

}  // namespace subh
