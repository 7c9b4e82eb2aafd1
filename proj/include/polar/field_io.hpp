#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "polar/torus_grid.hpp"

namespace polar {

// Field dump format:
//   FIELD v1 n=<N> name=<id>\n
// followed by N*N little-endian IEEE-754 doubles in row-major order.
// Masks use the same layout with values in {0.0, 1.0}.

struct NamedField {
    std::string name;
    ScalarField field;
};

namespace detail {

inline void put_le_double(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

inline double get_le_double(std::istream& is) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace detail

inline void write_field(std::ostream& os, const ScalarField& f, const std::string& name) {
    if (name.empty() || name.find_first_of(" \n\t") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "field name must be a non-empty token");
    }
    os << "FIELD v1 n=" << f.grid().n() << " name=" << name << '\n';
    for (double v : f.values()) detail::put_le_double(os, v);
    if (!os) throw Error(ErrorCode::IoError, "failed writing field " + name);
}

inline void write_field(const std::string& path, const ScalarField& f, const std::string& name) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
    write_field(os, f, name);
}

inline void write_mask(const std::string& path, const MaskSet& m, const std::string& name) {
    write_field(path, m.indicator(), name);
}

inline NamedField read_field(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw Error(ErrorCode::IoError, "missing FIELD header");
    std::istringstream hs(header);
    std::string magic, version, n_tok, name_tok;
    hs >> magic >> version >> n_tok >> name_tok;
    if (magic != "FIELD" || version != "v1" || n_tok.rfind("n=", 0) != 0 || name_tok.rfind("name=", 0) != 0) {
        throw Error(ErrorCode::IoError, "malformed FIELD header: " + header);
    }
    int n = 0;
    try {
        n = std::stoi(n_tok.substr(2));
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "bad grid size in header: " + header);
    }
    NamedField out{name_tok.substr(5), ScalarField(TorusGrid(n))};
    for (double& v : out.field.values()) v = detail::get_le_double(is);
    if (!is) throw Error(ErrorCode::IoError, "truncated FIELD payload for " + out.name);
    return out;
}

inline NamedField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
    return read_field(is);
}

inline MaskSet read_mask(const std::string& path) {
    NamedField nf = read_field(path);
    for (double v : nf.field.values()) {
        if (v != 0.0 && v != 1.0) throw Error(ErrorCode::IoError, "mask values must be 0 or 1 in " + path);
    }
    return MaskSet::positive(nf.field);
}

}  // namespace polar
