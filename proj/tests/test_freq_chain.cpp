#include <doctest.h>

#include <algorithm>
#include <string>

#include "coldnav/freq_chain.hpp"

using namespace coldnav::freq_chain;

#ifndef COLDNAV_CHAIN_DIR
#define COLDNAV_CHAIN_DIR "."
#endif

namespace {

const std::string chain_dir = COLDNAV_CHAIN_DIR;

}  // namespace

TEST_CASE("parse_frequency: exact millihertz with all suffixes") {
  CHECK(parse_frequency("1Hz") == 1000);
  CHECK(parse_frequency("0.001Hz") == 1);
  CHECK(parse_frequency("500kHz") == 500'000'000);
  CHECK(parse_frequency("3.284GHz") == 3'284'000'000'000LL);
  CHECK(parse_frequency("78.5MHz") == 78'500'000'000LL);
  CHECK(parse_frequency("192.114THz") == 192'114'000'000'000'000LL);
  CHECK(parse_frequency("-60MHz") == -60'000'000'000LL);
  CHECK(parse_frequency("+60MHz") == 60'000'000'000LL);

  CHECK_THROWS_AS(parse_frequency("60"), std::invalid_argument);       // no suffix
  CHECK_THROWS_AS(parse_frequency("60mhz"), std::invalid_argument);    // bad case
  CHECK_THROWS_AS(parse_frequency("60mHz"), std::invalid_argument);    // below 1 mHz unit
  CHECK_THROWS_AS(parse_frequency(".5MHz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_frequency("1.Hz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_frequency("0.0001Hz"), std::invalid_argument); // finer than 1 mHz
  CHECK_THROWS_AS(parse_frequency("abcHz"), std::invalid_argument);
}

TEST_CASE("format_frequency: shortest exact decimal") {
  CHECK(format_frequency(parse_frequency("8MHz")) == "8MHz");
  CHECK(format_frequency(parse_frequency("78.5MHz")) == "78.5MHz");
  CHECK(format_frequency(parse_frequency("500kHz")) == "500kHz");
  CHECK(format_frequency(parse_frequency("0.001Hz")) == "0.001Hz");
  CHECK(format_frequency(parse_frequency("6.568GHz")) == "6.568GHz");
}

TEST_CASE("parse_chain: smallest valid document") {
  const FreqChain chain = parse_chain("source a 1MHz\ndouble b a\n");
  REQUIRE(chain.nodes.size() == 2);
  CHECK(chain.nodes[0].id == "a");
  CHECK(chain.nodes[1].id == "b");
  CHECK(chain.checks.empty());
}

TEST_CASE("parse_chain: comments and blank lines ignored") {
  const FreqChain chain = parse_chain("# header\n\nsource a 1MHz  # trailing\n");
  CHECK(chain.nodes.size() == 1);
}

TEST_CASE("parse_chain: duplicate id names both lines") {
  try {
    parse_chain("source a 1MHz\nvco a 2MHz\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("duplicate id 'a'") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("parse_chain: forward and undefined references rejected") {
  CHECK_THROWS_AS(parse_chain("double b a\nsource a 1MHz\n"), ParseError);
  CHECK_THROWS_AS(parse_chain("source a 1MHz\nbeat c a missing\n"), ParseError);
}

TEST_CASE("parse_chain: diagnostics carry line numbers") {
  try {
    parse_chain("source a 1MHz\nfrobnicate b a\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("unknown node kind") != std::string::npos);
  }
  try {
    parse_chain("source a 1MQz\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_chain("check missing 1MHz tol=1Hz\n"), ParseError);
  CHECK_THROWS_AS(parse_chain("source a 1MHz\ndivide d a 0\n"), ParseError);
  CHECK_THROWS_AS(parse_chain("source a 1MHz\nsideband s a 1kHz orders=\n"), ParseError);
  CHECK_THROWS_AS(parse_chain("source a -1MHz\n"), ParseError);
}

TEST_CASE("evaluate: per-kind arithmetic") {
  SUBCASE("beat of the offset-lock pair lands at 160 MHz") {
    const FreqChain chain = parse_chain(
        "source a 3.284GHz\nsource s 1.562GHz\ndouble s2 s\nbeat out a s2\n");
    const auto sets = evaluate(chain);
    CHECK(sets.at("s2").components == std::vector<MilliHz>{parse_frequency("3.124GHz")});
    CHECK(sets.at("out").components == std::vector<MilliHz>{parse_frequency("160MHz")});
  }
  SUBCASE("mix keeps sum and difference, lowpass keeps the difference") {
    const FreqChain chain = parse_chain(
        "source a 160MHz\nvco v 152MHz\nmix m a v\nlowpass f m 100MHz\n");
    const auto sets = evaluate(chain);
    CHECK(sets.at("m").components ==
          std::vector<MilliHz>{parse_frequency("8MHz"), parse_frequency("312MHz")});
    CHECK(sets.at("f").components == std::vector<MilliHz>{parse_frequency("8MHz")});
  }
  SUBCASE("divide by 16 reaches 500 kHz exactly") {
    const FreqChain chain = parse_chain("source a 8MHz\ndivide d a 16\n");
    CHECK(evaluate(chain).at("d").components ==
          std::vector<MilliHz>{parse_frequency("500kHz")});
  }
  SUBCASE("shift clamps at zero") {
    const FreqChain chain = parse_chain("source a 1MHz\nshift s a -3MHz\n");
    CHECK(evaluate(chain).at("s").components == std::vector<MilliHz>{0});
  }
  SUBCASE("sideband produces f + k * offset for each order") {
    const FreqChain chain =
        parse_chain("source a 6.835GHz\nsideband s a 6.775GHz orders=-1,0,1\n");
    const auto set = evaluate(chain).at("s").components;
    REQUIRE(set.size() == 3);
    CHECK(set[0] == parse_frequency("60MHz"));
    CHECK(set[1] == parse_frequency("6.835GHz"));
    CHECK(set[2] == parse_frequency("13.61GHz"));
  }
  SUBCASE("lowpass may legally empty the set") {
    const FreqChain chain = parse_chain("source a 1GHz\nlowpass f a 1MHz\n");
    CHECK(evaluate(chain).at("f").components.empty());
  }
}

TEST_CASE("evaluate: component cap guards combinatorial blowup") {
  // Offsets in powers of 5 with orders -2..2 form balanced base-5 digits, so
  // no components collide: 5 -> 25 -> 125 entries.
  std::string doc = "source a 100MHz\n";
  std::string prev = "a";
  long long offset_khz = 1;
  for (int i = 0; i < 3; ++i) {
    const std::string id = "s" + std::to_string(i);
    doc += "sideband " + id + " " + prev + " " + std::to_string(offset_khz) +
           "kHz orders=-2,-1,0,1,2\n";
    prev = id;
    offset_khz *= 5;
  }
  CHECK_THROWS_AS(evaluate(parse_chain(doc)), EvalError);
}

TEST_CASE("evaluate: deterministic and order-invariant") {
  const std::string doc =
      "source a 3.284GHz\nsource b 1.562GHz\ndouble b2 b\nbeat n a b2\n"
      "vco v 152MHz\nmix m n v\nlowpass f m 100MHz\ndivide d f 16\n";
  // Same DAG with independent definitions topologically reordered.
  const std::string reordered =
      "vco v 152MHz\nsource b 1.562GHz\nsource a 3.284GHz\ndouble b2 b\nbeat n a b2\n"
      "mix m n v\nlowpass f m 100MHz\ndivide d f 16\n";
  const auto s1 = evaluate(parse_chain(doc));
  const auto s2 = evaluate(parse_chain(doc));
  const auto s3 = evaluate(parse_chain(reordered));
  for (const auto& [id, set] : s1) {
    CHECK(set.components == s2.at(id).components);
    CHECK(set.components == s3.at(id).components);
  }
}

TEST_CASE("check_locks: nearest component and tolerances") {
  const FreqChain chain = parse_chain(
      "source a 160MHz\nvco v 150MHz\nmix m a v\nlowpass f m 100MHz\ndivide d f 16\n"
      "check d 500kHz tol=1Hz\n");
  const CheckReport report = check_locks(chain);
  REQUIRE(report.results.size() == 1);
  CHECK(!report.results[0].pass);
  CHECK(!report.all_pass);
  // (160 - 150) / 16 MHz
  CHECK(report.results[0].nearest.value() == parse_frequency("625kHz"));
}

TEST_CASE("check_locks: empty set fails with no nearest component") {
  const FreqChain chain =
      parse_chain("source a 1GHz\nlowpass f a 1MHz\ncheck f 1kHz tol=1Hz\n");
  const CheckReport report = check_locks(chain);
  REQUIRE(report.results.size() == 1);
  CHECK(!report.results[0].pass);
  CHECK(!report.results[0].nearest.has_value());
}

TEST_CASE("cooling chain file: parses clean and every lock point passes") {
  const FreqChain chain = parse_chain_file(chain_dir + "/cooling_chain.fc");
  CHECK(chain.nodes.size() == 15);
  REQUIRE(chain.checks.size() == 5);

  const auto sets = evaluate(chain);
  CHECK(sets.at("after_double_diff").components ==
        std::vector<MilliHz>{parse_frequency("6.568GHz")});
  CHECK(sets.at("nu_int").components == std::vector<MilliHz>{parse_frequency("160MHz")});
  CHECK(sets.at("filt").components == std::vector<MilliHz>{parse_frequency("8MHz")});
  CHECK(sets.at("div16").components == std::vector<MilliHz>{parse_frequency("500kHz")});
  CHECK(sets.at("aom_gap").components == std::vector<MilliHz>{parse_frequency("78.5MHz")});

  const CheckReport report = check_locks(chain);
  CHECK(report.all_pass);
  for (const auto& r : report.results) {
    CHECK(r.pass);
    CHECK(r.nearest.value() == r.expected);  // exact, not merely within tolerance
  }
}

TEST_CASE("raman chain file: sideband selection recovers the hyperfine difference") {
  const FreqChain chain = parse_chain_file(chain_dir + "/raman_chain.fc");
  const auto sets = evaluate(chain);
  CHECK(sets.at("aom_beat").components == std::vector<MilliHz>{parse_frequency("60MHz")});
  CHECK(sets.at("feom_gap").components == std::vector<MilliHz>{parse_frequency("6.775GHz")});
  CHECK(sets.at("raman_diff").components ==
        std::vector<MilliHz>{parse_frequency("6.835GHz")});
  CHECK(check_locks(chain).all_pass);

  // Structural sideband check: the EOM node carries master +/- drive.
  const auto& feom = sets.at("feom");
  const MilliHz master = sets.at("master").components[0];
  const MilliHz drive = parse_frequency("6.775GHz");
  CHECK(feom.contains(master));
  CHECK(feom.contains(master - drive));
  CHECK(feom.contains(master + drive));
}
