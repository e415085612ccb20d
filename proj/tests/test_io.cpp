#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "gaussent/errors.hpp"
#include "gaussent/io.hpp"

using namespace gaussent;
using namespace gaussent::io;

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(2.8853900817779268) == "2.88539008178");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(number(0.1 + 0.2).get<double>() == 0.3);
  CHECK(number(-0.0).dump() == "0.0");
  CHECK(number(std::numeric_limits<double>::infinity()) == Json("inf"));
}

TEST_CASE("state JSON round trip") {
  const auto sf = StandardForm::make(3, 2, 1.5, -1.0);
  const Json j = state_to_json(sf);
  CHECK(j["convention"] == std::string(kConvention));
  CHECK(state_from_json(j) == sf);

  const Json dense = dense_to_json(sf.dense());
  CHECK(dense["dense"].size() == 16);
  const auto back = state_from_json(dense);
  CHECK(back.a() == doctest::Approx(3.0));
  CHECK(back.c2() == doctest::Approx(-1.0));

  Json wrong = j;
  wrong["convention"] = "vacuum-variance-1/2";
  CHECK_THROWS_AS(state_from_json(wrong), DomainError);
  CHECK_THROWS_AS(state_from_json(Json{{"a", 2}}), DomainError);
  CHECK_THROWS_AS(state_from_json(Json{{"dense", {1, 2, 3}}}), DomainError);
  CHECK_THROWS_AS(dense_from_values(std::vector<double>(15, 1.0)), DomainError);
}

TEST_CASE("corpus reader skips metadata and blank lines") {
  std::istringstream in(
      "{\"metadata\":{\"tool\":\"gaussent\"}}\n"
      "{\"a\":2,\"b\":2,\"c1\":1.2,\"c2\":-0.8}\n"
      "\n"
      "{\"a\":1,\"b\":1,\"c1\":0,\"c2\":0}\n");
  const auto states = read_corpus(in);
  REQUIRE(states.size() == 2);
  CHECK(states[0] == StandardForm::make(2, 2, 1.2, -0.8));
  CHECK(states[1] == StandardForm::vacuum());

  std::istringstream bad("{\"a\":1,\"b\":1,\"c1\":3,\"c2\":0}\n");
  CHECK_THROWS_AS(read_corpus(bad), DomainError);
}

TEST_CASE("records") {
  const Json m = measure_record(tmsv(1.0));
  CHECK(m["E_N"].get<double>() == doctest::Approx(2.88539008178));
  CHECK(m["separable"] == false);
  const Json sep = lower_bound_record(StandardForm::vacuum());
  CHECK(sep["r1_tilde"] == Json("nan"));
}

TEST_CASE("record writer") {
  const Metadata meta{{"tool", "gaussent"}, {"seed", "7"}};
  SUBCASE("json lines") {
    std::ostringstream out;
    RecordWriter w(out, Format::JsonLines, meta);
    w.write(Json{{"x", 1}});
    w.write(Json{{"x", 2}});
    CHECK(out.str() == "{\"metadata\":{\"tool\":\"gaussent\",\"seed\":\"7\"}}\n{\"x\":1}\n{\"x\":2}\n");
  }
  SUBCASE("csv flattens nested objects") {
    std::ostringstream out;
    RecordWriter w(out, Format::Csv, meta);
    w.write(Json{{"state", {{"a", 2}, {"b", 3}}}, {"E", 0.5}});
    const std::string s = out.str();
    CHECK(s.rfind("# tool: gaussent\n# seed: 7\n", 0) == 0);
    CHECK(s.find("a,b,E\n2,3,0.5\n") != std::string::npos);
  }
  CHECK(format_from_string("csv") == Format::Csv);
  CHECK(format_from_string("json-lines") == Format::JsonLines);
  CHECK_THROWS_AS(format_from_string("xml"), InvalidArgument);
}
