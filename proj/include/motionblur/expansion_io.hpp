#pragma once

// Text serialization of fitted expansions.
//
//   HEXP N a    then c(m, n) for m = 0..N, n = 0..N-m (row-major, m + n <= N)
//   LFEXP N a   then re im of c(m, n) for m = 0..N, n = -m, -m+2, .., m
//
// One coefficient (or re/im pair) per line, printed at round-trip precision.

#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "motionblur/error.hpp"
#include "motionblur/hermite.hpp"
#include "motionblur/laguerre.hpp"

namespace motionblur {

namespace detail {

inline void expect_header(std::istream& in, const std::string& tag, int& N, double& a) {
    std::string word;
    if (!(in >> word) || word != tag) throw IoError("expansion: expected header '" + tag + "'");
    if (!(in >> N >> a)) throw IoError("expansion: malformed " + tag + " header");
}

inline double read_number(std::istream& in, const char* what) {
    double v;
    if (!(in >> v)) throw IoError(std::string("expansion: truncated coefficient list (") + what + ")");
    return v;
}

}  // namespace detail

inline void write_hermite(const HermiteExpansion& e, std::ostream& out) {
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "HEXP " << e.order << ' ' << e.scale << '\n';
    for (int m = 0; m <= e.order; ++m)
        for (int n = 0; m + n <= e.order; ++n) out << e.coeffs(m, n) << '\n';
}

inline HermiteExpansion read_hermite(std::istream& in) {
    int N;
    double a;
    detail::expect_header(in, "HEXP", N, a);
    if (N < 0 || N > kHermiteMaxOrder || !(a >= 1.0)) throw IoError("expansion: HEXP header out of range");
    HermiteExpansion e(N, a);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) e.coeffs(m, n) = detail::read_number(in, "HEXP");
    return e;
}

inline void write_laguerre(const LaguerreFourierExpansion& e, std::ostream& out) {
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "LFEXP " << e.order << ' ' << e.scale << '\n';
    for (int m = 0; m <= e.order; ++m)
        for (int n = -m; n <= m; n += 2) out << e(m, n).real() << ' ' << e(m, n).imag() << '\n';
}

inline LaguerreFourierExpansion read_laguerre(std::istream& in) {
    int N;
    double a;
    detail::expect_header(in, "LFEXP", N, a);
    if (N < 0 || !(a >= 1.0)) throw IoError("expansion: LFEXP header out of range");
    LaguerreFourierExpansion e(N, a);
    for (int m = 0; m <= N; ++m)
        for (int n = -m; n <= m; n += 2) {
            const double re = detail::read_number(in, "LFEXP");
            e(m, n) = Complex(re, detail::read_number(in, "LFEXP"));
        }
    return e;
}

}  // namespace motionblur
