#pragma once

#include <charconv>
#include <ostream>
#include <string>

namespace pompeiu {

/// 17 significant digits, scientific, locale independent.
inline std::string format_scientific(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline void write_scientific(std::ostream& out, double v) { out << format_scientific(v); }

}  // namespace pompeiu
