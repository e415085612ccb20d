#include "gaussent/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "gaussent/errors.hpp"

namespace gaussent::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  // Round-trip through the 12-digit text so JSON and CSV agree exactly.
  double rounded = std::strtod(format_number(x).c_str(), nullptr);
  if (rounded == 0.0) rounded = 0.0;  // drop negative zero
  return rounded;
}

Json state_to_json(const StandardForm& sf) {
  Json j;
  j["convention"] = kConvention;
  j["a"] = number(sf.a());
  j["b"] = number(sf.b());
  j["c1"] = number(sf.c1());
  j["c2"] = number(sf.c2());
  return j;
}

Json dense_to_json(const CovMatrix& sigma) {
  Json values = Json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) values.push_back(number(sigma(i, j)));
  Json j;
  j["convention"] = kConvention;
  j["dense"] = std::move(values);
  return j;
}

namespace {

double get_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DomainError(std::string("state is missing field '") + key + "'");
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    const auto s = it->get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw DomainError(std::string("field '") + key + "' is not a number");
}

}  // namespace

CovMatrix dense_from_values(const std::vector<double>& values) {
  if (values.size() != 16)
    throw DomainError("dense covariance matrix needs 16 values, got " +
                      std::to_string(values.size()));
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = values[4 * i + j];
  if (!m.allFinite()) throw DomainError("dense covariance matrix has non-finite entries");
  return CovMatrix(m);
}

StandardForm state_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("state must be a JSON object");
  if (auto it = j.find("convention"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>() != kConvention)
      throw DomainError("unsupported convention " + it->dump() + ", expected \"" +
                        std::string(kConvention) + "\"");
  }
  if (auto it = j.find("dense"); it != j.end()) {
    if (!it->is_array()) throw DomainError("'dense' must be an array of 16 numbers");
    std::vector<double> values;
    for (const auto& v : *it) {
      if (!v.is_number()) throw DomainError("'dense' must contain only numbers");
      values.push_back(v.get<double>());
    }
    return to_standard_form(dense_from_values(values));
  }
  return StandardForm::make(get_number(j, "a"), get_number(j, "b"), get_number(j, "c1"),
                            get_number(j, "c2"));
}

std::vector<StandardForm> read_corpus(std::istream& in) {
  std::vector<StandardForm> states;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.is_object() && j.contains("metadata")) continue;
    try {
      states.push_back(state_from_json(j));
    } catch (const DomainError& e) {
      throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return states;
}

Json measure_record(const StandardForm& sf) {
  const auto lb = lower_bound(sf);
  const double nu = nu_tilde_minus(sf);
  Json j;
  j["state"] = {{"a", number(sf.a())}, {"b", number(sf.b())}, {"c1", number(sf.c1())},
                {"c2", number(sf.c2())}};
  j["nu_tilde_minus"] = number(nu);
  j["E_N"] = number(log_negativity(sf));
  j["r_tilde_minus"] = number(lb.interval.r_minus);
  j["E_F_lower_bound"] = number(lb.eof);
  j["separable"] = is_separable(sf);
  return j;
}

Json lower_bound_record(const StandardForm& sf) {
  const auto terms = r_tilde_terms(sf);
  const auto lb = lower_bound(sf);
  double r1 = NAN, r2 = NAN;
  if (!is_separable(sf)) {
    const auto loc = local_squeeze_params(sf, lb.interval.r_minus);
    r1 = loc.r1;
    r2 = loc.r2;
  }
  Json j;
  j["state"] = {{"a", number(sf.a())}, {"b", number(sf.b())}, {"c1", number(sf.c1())},
                {"c2", number(sf.c2())}};
  j["kappa"] = number(terms.kappa);
  j["lambda_plus"] = number(terms.lambda_plus);
  j["lambda_minus"] = number(terms.lambda_minus);
  j["r_tilde_minus"] = number(lb.interval.r_minus);
  j["r_tilde_plus"] = number(lb.interval.r_plus);
  j["r1_tilde"] = number(r1);
  j["r2_tilde"] = number(r2);
  j["E_F_lower_bound"] = number(lb.eof);
  return j;
}

Json to_json(const EofResult& r) {
  Json j;
  j["r_o"] = number(r.r_o);
  j["E_F"] = number(r.eof);
  j["r1_o"] = number(r.r1_o);
  j["r2_o"] = number(r.r2_o);
  j["iterations"] = r.iterations;
  j["certified_gap"] = number(r.certified_gap);
  j["residual_margin"] = number(r.residual_margin);
  return j;
}

Json to_json(const EprResult& r) {
  Json j;
  j["beta_min"] = number(r.beta_min);
  j["gx"] = number(r.gx);
  j["gp"] = number(r.gp);
  j["iterations"] = r.iterations;
  return j;
}

Json to_json(const Decomposition& d) {
  Json classical = Json::array();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) classical.push_back(number(d.classical_part(i, k)));
  Json j;
  j["kind"] = std::string(to_string(d.kind));
  j["r"] = number(d.params.r);
  j["r1"] = number(d.params.r1);
  j["r2"] = number(d.params.r2);
  j["classical_part"] = std::move(classical);
  return j;
}

Format format_from_string(std::string_view s) {
  if (s == "json-lines") return Format::JsonLines;
  if (s == "csv") return Format::Csv;
  throw InvalidArgument("unknown format '" + std::string(s) + "' (expected csv or json-lines)");
}

namespace {

void flatten(const Json& j, Json& out) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object())
      flatten(value, out);
    else
      out[key] = value;
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

RecordWriter::RecordWriter(std::ostream& out, Format format, Metadata metadata)
    : out_(out), format_(format), metadata_(std::move(metadata)) {}

void RecordWriter::start(const Json& flat) {
  started_ = true;
  if (format_ == Format::JsonLines) {
    Json meta = Json::object();
    for (const auto& [k, v] : metadata_) meta[k] = v;
    out_ << Json{{"metadata", meta}}.dump() << '\n';
    return;
  }
  for (const auto& [k, v] : metadata_) out_ << "# " << k << ": " << v << '\n';
  for (const auto& [key, value] : flat.items()) columns_.push_back(key);
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
  out_ << '\n';
}

void RecordWriter::write(const Json& record) {
  Json flat = Json::object();
  if (format_ == Format::Csv) flatten(record, flat);
  if (!started_) start(flat);
  if (format_ == Format::JsonLines) {
    out_ << record.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    auto it = flat.find(columns_[i]);
    out_ << (i ? "," : "") << (it == flat.end() ? std::string() : csv_cell(*it));
  }
  out_ << '\n';
}

}  // namespace gaussent::io
