#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "catq/fixtures.hpp"

using namespace catq;

TEST_CASE("complex notation") {
  const double pi = std::numbers::pi;
  CHECK(std::abs(parse_complex("0.917") - 0.917) < 1e-15);
  CHECK(std::abs(parse_complex("-0.27") + 0.27) < 1e-15);
  CHECK(std::abs(parse_complex("i0.773") - cplx{0.0, 0.773}) < 1e-15);
  CHECK(std::abs(parse_complex("-i0.656") - cplx{0.0, -0.656}) < 1e-15);
  CHECK(std::abs(parse_complex("0.814exp(i0.399π)") - std::polar(0.814, 0.399 * pi)) < 1e-14);
  CHECK(std::abs(parse_complex("1.657·exp(-i0.46π)") - std::polar(1.657, -0.46 * pi)) < 1e-14);
  CHECK(std::abs(parse_complex("0.814*exp(i0.399pi)") - std::polar(0.814, 0.399 * pi)) < 1e-14);
  CHECK(std::abs(parse_complex("exp(i0.5π)") - cplx{0.0, 1.0}) < 1e-15);
  CHECK(std::abs(parse_complex(" 1.2 exp( -i 0.25 pi ) ") - std::polar(1.2, -0.25 * pi)) < 1e-14);
  CHECK_THROWS_AS(parse_complex("zero"), FixtureError);
  CHECK_THROWS_AS(parse_complex("1.0exp(0.5)"), FixtureError);
  CHECK(parse_real("±0.3409") == doctest::Approx(0.3409));
}

TEST_CASE("ini parsing") {
  std::istringstream in(
      "# header\n[a]\nx = 1.5  # trailing\nlist = 1, 2,3\nz = i0.5, -0.2\n\n[b]\nname = hello\n");
  const auto f = parse_fixture(in);
  REQUIRE(f.sections.size() == 2);
  const auto& a = f.section("a");
  CHECK(a.real("x") == 1.5);
  CHECK(a.int_list("list") == std::vector<int>{1, 2, 3});
  CHECK(a.complex_list("z").size() == 2);
  CHECK(f.section("b").text("name") == "hello");
  CHECK_THROWS_AS(a.real("missing"), FixtureError);
  CHECK_THROWS_AS(f.section("c"), FixtureError);

  std::istringstream bad("key = 1\n");
  CHECK_THROWS_AS(parse_fixture(bad), FixtureError);
}

TEST_CASE("shipped fixtures load") {
  const auto t1 = load_table1(fixture_dir() / "table1.csv");
  CHECK(t1.size() == 16);
  const auto t2 = load_entangled_table(fixture_dir() / "table2.ini");
  CHECK(t2.size() == 4);
  CHECK(t2[0].splitters.size() == 3);
  const auto t3 = load_entangled_table(fixture_dir() / "table3.ini");
  CHECK(std::abs(t3[0].splitters[0].t - 1.0) < 1e-12);
  for (const auto* name : {"table4.ini", "table5.ini", "table6.ini"}) {
    const auto cols = load_cascade_table(fixture_dir() / name);
    CHECK(cols.size() == 2);
    for (const auto& c : cols) CHECK(c.config.n() == 10);
  }
}

TEST_CASE("splitter matching") {
  const std::vector<SplitterPair> ref{{0.755, cplx{0.0, -0.656}}, {0.634, cplx{0.0, 0.773}}};
  // Same pairs, swapped and with a per-factor phase.
  const cplx ph = std::polar(1.0, 0.9);
  auto unit = [&](double t, cplx r) {
    const double h = std::hypot(t, std::abs(r));
    return BeamSplitter(t / h * ph, r / h * ph);
  };
  const std::vector<BeamSplitter> got{unit(0.634, cplx{0.0, 0.773}), unit(0.755, cplx{0.0, -0.656})};
  const auto m = match_splitters(ref, got);
  CHECK(m.assignment == std::vector<int>{1, 0});
  CHECK(m.max_t_error < 2e-3);
  CHECK(m.max_r_error < 2e-3);
}
