#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gaussent/decomp.hpp"
#include "gaussent/gstate.hpp"
#include "gaussent/measures.hpp"
#include "gaussent/oracle.hpp"

namespace gaussent::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kConvention = "vacuum-variance-1";
inline constexpr int kSignificantDigits = 12;

/// printf("%.12g"); non-finite values as "inf", "-inf", "nan".
std::string format_number(double x);
/// x rounded to 12 significant digits, as a JSON number (or a string for
/// non-finite values, which JSON cannot represent).
Json number(double x);

Json state_to_json(const StandardForm& sf);
Json dense_to_json(const CovMatrix& sigma);

/// Accepts {a, b, c1, c2} or {dense: [16 numbers, row-major]}; a present
/// "convention" field must be "vacuum-variance-1". Dense input is reduced
/// to standard form. Throws DomainError on malformed input.
StandardForm state_from_json(const Json& j);
CovMatrix dense_from_values(const std::vector<double>& values);

/// Reads one state per line; blank lines and {"metadata": ...} lines are
/// skipped.
std::vector<StandardForm> read_corpus(std::istream& in);

Json measure_record(const StandardForm& sf);
Json lower_bound_record(const StandardForm& sf);
Json to_json(const EofResult& r);
Json to_json(const EprResult& r);
Json to_json(const Decomposition& d);

enum class Format { JsonLines, Csv };
Format format_from_string(std::string_view s);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Writes records either as JSON lines (a {"metadata": {...}} line first)
/// or as CSV ("# key: value" comment lines, then a header row). Nested JSON
/// objects are flattened for CSV; the header comes from the first record.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, Format format, Metadata metadata);
  void write(const Json& record);

 private:
  void start(const Json& flat);

  std::ostream& out_;
  Format format_;
  Metadata metadata_;
  bool started_ = false;
  std::vector<std::string> columns_;
};

}  // namespace gaussent::io
