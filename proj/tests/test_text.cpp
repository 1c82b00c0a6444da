// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/error.hpp"
#include "covert/random.hpp"
#include "covert/text.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

using namespace covert;

TEST_CASE("format_double round-trips and stays short") {
  CHECK(text::format_double(0.1) == "0.1");
  CHECK(text::format_double(2.0) == "2");
  CHECK(text::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(text::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(uniform01(rng) - 0.5, static_cast<int>(uniform_index(rng, 80)) - 40);
    const auto s = text::format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(text::parse_double(s, "x") == x);
  }
  CHECK(text::parse_double("inf", "x") == std::numeric_limits<double>::infinity());
}

TEST_CASE("strict parsers") {
  CHECK(text::parse_uint(" 42 ", "n") == 42);
  CHECK_THROWS_AS(text::parse_uint("-1", "n"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_uint("4x", "n"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_uint("", "n"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_double("1.5e", "x"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_double("", "x"), std::invalid_argument);
}

TEST_CASE("tokenizing") {
  CHECK(text::split_whitespace("  a\tb  c ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(text::split_whitespace("   ").empty());
  CHECK(text::trim(" \tx y\r\n") == "x y");
}

TEST_CASE("labels") {
  CHECK_NOTHROW(text::check_label("CS11"));
  CHECK_NOTHROW(text::check_label("a#b"));
  CHECK_THROWS_AS(text::check_label(""), std::invalid_argument);
  CHECK_THROWS_AS(text::check_label("#a"), std::invalid_argument);
  CHECK_THROWS_AS(text::check_label("a b"), std::invalid_argument);
  CHECK_THROWS_AS(text::check_label("a,b"), std::invalid_argument);
}

TEST_CASE("file helpers") {
  const auto path = std::filesystem::temp_directory_path() / "covert-test-text.txt";
  text::write_file(path, "one\r\ntwo\n\nthree");
  CHECK(text::read_lines(path) == std::vector<std::string>{"one", "two", "", "three"});
  CHECK_THROWS_AS(text::read_lines(path.string() + ".missing"), IoError);
  CHECK_THROWS_AS(text::write_file("/nonexistent-dir/x.txt", "x"), IoError);
}

TEST_CASE("derived seeds") {
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
