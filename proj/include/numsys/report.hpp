#pragma once

// Tabular reports and their CSV / JSON emission.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace numsys {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Report {
  std::string name;
  std::vector<std::pair<std::string, Cell>> meta;  // JSON only
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json };
/// "csv" or "json"; anything else is a DomainError.
Format parse_format(std::string_view text);

/// Header row plus one line per row, LF endings, fields quoted when they
/// hold a comma, quote or newline. Doubles use %.17g.
std::string to_csv(const Report& r);
/// {"report", "meta", "columns", "rows"} with doubles at %.17g and
/// non-finite values as null.
std::string to_json(const Report& r);
/// Inverse of to_json: to_json(from_json(to_json(r))) == to_json(r).
Report from_json(std::string_view text);

/// Writes to `path`, or to stdout when path is empty or "-". Throws
/// ComputeError on I/O failure.
void emit(const Report& r, Format f, const std::string& path);

}  // namespace numsys
