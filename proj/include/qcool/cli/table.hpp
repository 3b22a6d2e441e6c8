#pragma once

// Row-oriented CSV / JSON-lines writer with a fixed column order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcool::cli {

enum class Format { csv, jsonl };

Format parse_format(const std::string& text);

/// A missing cell is written as an empty CSV field or a JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t, bool, std::string>;

/// Non-finite doubles become missing cells.
Cell number(double v);

class TableWriter {
 public:
  TableWriter(std::ostream& os, Format format, std::vector<std::string> columns);

  /// Cells must follow the column order given at construction.
  void row(const std::vector<Cell>& cells);

  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::ostream& os_;
  Format format_;
  std::vector<std::string> columns_;
};

}  // namespace qcool::cli
