#ifndef BTRATE_IO_HPP_
#define BTRATE_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/geometric.hpp"

namespace btrate {

// CSV here means plain comma-separated fields without quoting; LF or CRLF
// line endings; blank lines are ignored.

namespace detail {

struct CsvLine {
  std::size_t number;  // 1-based
  std::vector<std::string> fields;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<CsvLine> split_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvLine> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    line = trim(line);
    if (line.empty()) continue;
    CsvLine out{number, {}};
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      out.fields.emplace_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    lines.push_back(std::move(out));
  }
  return lines;
}

[[noreturn]] inline void fail_at(std::size_t line, const std::string& message) {
  throw InvalidInput("line " + std::to_string(line) + ": " + message);
}

inline double parse_number(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    fail_at(line, "'" + std::string(field) + "' is not a finite number");
  }
  return value;
}

inline std::size_t intern(std::vector<std::string>& labels,
                          std::unordered_map<std::string, std::size_t>& index,
                          const std::string& label, std::size_t line) {
  if (label.empty()) fail_at(line, "empty label");
  auto [it, inserted] = index.emplace(label, labels.size());
  if (inserted) labels.push_back(label);
  return it->second;
}

}  // namespace detail

enum class InputFormat { results, matrix };

/// Results files start with a `winner,loser` header; anything else is
/// treated as a matrix.
inline InputFormat detect_format(std::string_view text) {
  const auto lines = detail::split_csv(text);
  if (!lines.empty() && lines.front().fields.size() >= 2 &&
      lines.front().fields[0] == "winner" && lines.front().fields[1] == "loser") {
    return InputFormat::results;
  }
  return InputFormat::matrix;
}

/// Accumulates `winner,loser[,count]` rows into a comparison matrix whose
/// labels appear in first-appearance order. A missing count means 1. The
/// `winner,loser[,count]` header is expected; without it every line is read
/// as data with an optional third count field.
inline ComparisonMatrix parse_results(std::string_view text) {
  const auto lines = detail::split_csv(text);
  if (lines.empty()) throw InvalidInput("results file is empty");
  const auto& first = lines.front();
  const bool has_header = first.fields.size() >= 2 && first.fields[0] == "winner" &&
                          first.fields[1] == "loser";
  std::size_t width = 0;  // 0: 2 or 3 fields per row
  if (has_header) {
    const bool with_count = first.fields.size() == 3 && first.fields[2] == "count";
    if (!(first.fields.size() == 2 || with_count)) {
      detail::fail_at(first.number, "expected header 'winner,loser' or 'winner,loser,count'");
    }
    width = first.fields.size();
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;
  struct Row {
    std::size_t winner, loser;
    double count;
  };
  std::vector<Row> rows;
  for (std::size_t k = has_header ? 1 : 0; k < lines.size(); ++k) {
    const auto& line = lines[k];
    const std::size_t nf = line.fields.size();
    if (width != 0 ? nf != width : (nf != 2 && nf != 3)) {
      detail::fail_at(line.number, "expected " +
                                       (width != 0 ? std::to_string(width) : std::string("2 or 3")) +
                                       " fields, found " + std::to_string(nf));
    }
    if (line.fields[0] == line.fields[1]) {
      detail::fail_at(line.number, "'" + line.fields[0] + "' cannot beat itself");
    }
    const double count = nf == 3 ? detail::parse_number(line.fields[2], line.number) : 1.0;
    if (count < 0.0) detail::fail_at(line.number, "negative count");
    const std::size_t w = detail::intern(labels, index, line.fields[0], line.number);
    const std::size_t l = detail::intern(labels, index, line.fields[1], line.number);
    rows.push_back({w, l, count});
  }
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (const auto& r : rows) {
    counts(static_cast<Eigen::Index>(r.winner), static_cast<Eigen::Index>(r.loser)) += r.count;
  }
  return ComparisonMatrix(std::move(labels), std::move(counts));
}

/// Square matrix CSV: the first row lists labels after one leading cell,
/// each following row starts with the same label in the same order.
inline ComparisonMatrix parse_matrix(std::string_view text) {
  const auto lines = detail::split_csv(text);
  if (lines.empty()) throw InvalidInput("matrix file is empty");
  const auto& header = lines.front();
  std::vector<std::string> labels(header.fields.begin() + 1, header.fields.end());
  const std::size_t n = labels.size();
  if (lines.size() - 1 != n) {
    throw InvalidInput("matrix is not square: " + std::to_string(n) + " column labels but " +
                       std::to_string(lines.size() - 1) + " rows");
  }
  Eigen::MatrixXd counts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& line = lines[i + 1];
    if (line.fields.size() != n + 1) {
      detail::fail_at(line.number, "expected " + std::to_string(n + 1) + " fields, found " +
                                       std::to_string(line.fields.size()));
    }
    if (line.fields[0] != labels[i]) {
      detail::fail_at(line.number, "row label '" + line.fields[0] +
                                       "' does not match column label '" + labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::parse_number(line.fields[j + 1], line.number);
    }
  }
  return ComparisonMatrix(std::move(labels), std::move(counts));
}

inline ComparisonMatrix parse_comparisons(std::string_view text) {
  return detect_format(text) == InputFormat::results ? parse_results(text) : parse_matrix(text);
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Fixed six decimals, with negative zero printed as zero.
inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

/// Inverse of parse_matrix.
inline std::string write_matrix_csv(const ComparisonMatrix& c) {
  std::string out;
  for (const auto& label : c.items()) out += "," + label;
  out += "\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out += c.items()[i];
    for (std::size_t j = 0; j < c.size(); ++j) out += "," + format_shortest(c(i, j));
    out += "\n";
  }
  return out;
}

/// Competitors in first-appearance order plus races in first-appearance
/// order.
struct RaceData {
  std::vector<std::string> items;
  std::vector<RaceRecord> races;
};

/// `race_id,competitor,rank` rows. Rank validity is checked per race.
inline RaceData parse_races(std::string_view text) {
  const auto lines = detail::split_csv(text);
  if (lines.empty()) throw InvalidInput("race file is empty");
  const auto& header = lines.front();
  if (!(header.fields.size() == 3 && header.fields[0] == "race_id" &&
        header.fields[1] == "competitor" && header.fields[2] == "rank")) {
    detail::fail_at(header.number, "expected header 'race_id,competitor,rank'");
  }
  RaceData data;
  std::unordered_map<std::string, std::size_t> item_index;
  std::unordered_map<std::string, std::size_t> race_index;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.fields.size() != 3) {
      detail::fail_at(line.number, "expected 3 fields, found " + std::to_string(line.fields.size()));
    }
    if (line.fields[0].empty()) detail::fail_at(line.number, "empty race id");
    int rank = 0;
    const auto& f = line.fields[2];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rank);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || rank < 1) {
      detail::fail_at(line.number, "rank '" + f + "' is not a positive integer");
    }
    const std::size_t item = detail::intern(data.items, item_index, line.fields[1], line.number);
    auto [it, inserted] = race_index.emplace(line.fields[0], data.races.size());
    if (inserted) data.races.push_back(RaceRecord{line.fields[0], {}, {}});
    RaceRecord& race = data.races[it->second];
    race.participants.push_back(item);
    race.ranks.push_back(rank);
  }
  if (data.races.empty()) throw InvalidInput("race file has no results");
  return data;
}

}  // namespace btrate

#endif  // BTRATE_IO_HPP_
