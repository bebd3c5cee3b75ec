#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qpperc::csv {

/// Decimal with 17 significant digits, the round-trip precision of IEEE
/// doubles. All numeric output flows through here so that equal values
/// render byte-identically everywhere.
std::string format_decimal(double v);

std::string format_int(std::int64_t v);

/// One comma-separated row. Cells must not contain commas or newlines;
/// every producer in this toolkit satisfies that by construction.
void write_row(std::ostream& out, const std::vector<std::string>& cells);

std::string join_row(const std::vector<std::string>& cells);

}  // namespace qpperc::csv
