#ifndef FASWIPT_CSV_HPP
#define FASWIPT_CSV_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace faswipt {

/// Plain-decimal formatting with 9 significant digits (no exponent notation).
inline std::string format_decimal(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? "0.00000000" : "nan";
    const double a = std::abs(x);
    int exp10 = static_cast<int>(std::floor(std::log10(a)));
    int decimals = 8 - exp10;
    if (decimals < 0) decimals = 0;
    if (decimals > 40) decimals = 40;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return buf;
}

}  // namespace faswipt

#endif
