#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "chaotic_extremes/model_io.hpp"

using namespace chaotic_extremes;

TEST_CASE("empirical model round-trips bit for bit", "[io]") {
  const auto model = build_empirical(MapParameter(1.99), 5000, 250, 12);
  std::stringstream ss;
  write_model(ss, model);
  const auto back = read_model(ss);
  CHECK(back.kind() == MeasureKind::empirical);
  CHECK(back.a() == 1.99);
  CHECK(back.burn_in() == 250);
  CHECK(back.seed() == 12);
  REQUIRE(back.sample_count() == model.sample_count());
  for (std::size_t i = 0; i < model.sample_count(); ++i) {
    REQUIRE(back.samples()[i] == model.samples()[i]);
  }
  std::stringstream again;
  write_model(again, back);
  std::stringstream first;
  write_model(first, model);
  CHECK(again.str() == first.str());
}

TEST_CASE("analytic model file", "[io]") {
  std::stringstream ss;
  write_model(ss, MeasureModel::analytic_a2());
  CHECK(ss.str() == "kind,a,N,burn_in,seed\nanalytic-a2,2,0,0,0\n");
  CHECK(read_model(ss).kind() == MeasureKind::analytic_a2);
}

TEST_CASE("malformed model files are rejected", "[io]") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_model(is);
  };
  CHECK_THROWS_AS(parse(""), argument_error);
  CHECK_THROWS_AS(parse("a,b\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,1\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nmystery,2,0,0,0\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nanalytic-a2,1.9,0,0,0\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,x,0,0\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,3,0,0\n0.1\n0.2\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,2,0,0\n0.1\nabc\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,2,0,0\n0.2\n0.1\n"), argument_error);
  CHECK_THROWS_AS(parse("kind,a,N,burn_in,seed\nempirical,2,2,0,0\n0.1\n1.5\n"), domain_error);
}
