#include "qpperc/csv.hpp"

#include <cstdio>

namespace qpperc::csv {

std::string format_decimal(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_int(std::int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
}

std::string join_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    out << join_row(cells);
}

}  // namespace qpperc::csv
