#include <random>

#include "cli.hpp"
#include "doctest.h"

using namespace wz;
using namespace wz::cli;

namespace {

size_t error_position(const std::string& text) {
  try {
    parse_descriptor(text);
  } catch (const ParseError& e) {
    return e.position;
  }
  return std::string::npos;
}

// Random descriptor text from the grammar; small enough to build.
std::string random_descriptor(std::mt19937_64& g, int depth) {
  const uint32_t primes[] = {2, 3, 5};
  const uint32_t p = primes[g() % 3];
  switch (depth > 0 ? g() % 5 : g() % 3) {
    case 0: return "Zmod(" + std::to_string(p) + "^" + std::to_string(1 + g() % 3) + ")";
    case 1: return "Fp(" + std::to_string(p) + ")";
    case 2: return "Fq(" + std::to_string(p) + "," + std::to_string(1 + g() % 2) + ")";
    case 3: return "Series(" + random_descriptor(g, depth - 1) + ",t,2)";
    default: return "Ext(Zmod(" + std::to_string(p) + "^2),x,x^2-" + std::to_string(p) + ")";
  }
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "wz");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(int(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("descriptor examples") {
  auto d = parse_descriptor("Zmod(2^3)");
  CHECK(d->kind == RingDescriptor::Kind::IntegersMod);
  CHECK(d->p == 2);
  CHECK(d->exponent == 3);
  CHECK(parse_descriptor("Zmod(8)")->str() == "Zmod(2^3)");
  CHECK(Ring::make(parse_descriptor("Zmod(8)"))->order() == 8);

  auto s = parse_descriptor("Series(Fq(2,2),t,4)");
  CHECK(s->kind == RingDescriptor::Kind::TruncatedSeries);
  CHECK(s->precision == 4);
  CHECK(s->base->kind == RingDescriptor::Kind::FiniteField);
  CHECK(Ring::make(s)->residue_degree() == 2);

  auto e = parse_descriptor("Ext(Zmod(9), x, x^2-3)");
  CHECK(e->kind == RingDescriptor::Kind::QuotientExtension);
  CHECK(e->str() == "Ext(Zmod(3^2),x,x^2-3)");
  CHECK(Ring::make(e)->order() == 81);

  CHECK(parse_descriptor("Fq(2, z^2+z+1, w)")->str() == RingDescriptor::fq_poly(2, parse_expr("z^2+z+1"), "w")->str());
  CHECK(parse_descriptor("Ext(Fp(2),y,y^2,2)")->ideal_power == 2);
}

TEST_CASE("descriptors round-trip through the printer") {
  std::mt19937_64 g(17);
  for (int i = 0; i < 60; ++i) {
    auto text = random_descriptor(g, 2);
    CAPTURE(text);
    auto d = parse_descriptor(text);
    auto printed = d->str();
    CHECK(parse_descriptor(printed)->str() == printed);
    CHECK(Ring::make(parse_descriptor(printed))->order() == Ring::make(d)->order());
  }
}

TEST_CASE("descriptor errors carry positions") {
  CHECK(error_position("Zmod(12)") == 5);
  CHECK(error_position("Zmod(2^3") == 8);
  CHECK(error_position("Fp(4)") == 3);
  CHECK(error_position("Series(Fp(2),,4)") == 13);
  CHECK(error_position("Ring(2)") == 0);
  CHECK(error_position("Zmod(8) x") == 8);
  CHECK(error_position("Ext(Zmod(9),x,x^^2)") == 16);
  CHECK(error_position("Fp(2)") == std::string::npos);
}

TEST_CASE("Witt vectors in text") {
  auto R = Ring::make(parse_descriptor("Zmod(8)"));
  auto x = parse_witt("W[p=2,N=3; 1,0,1]@Zmod(2^3)", nullptr);
  CHECK(x.str() == "W[p=2,N=3; 1,0,1]@Zmod(2^3)");
  auto y = parse_witt("1, 0, 1", R);
  CHECK(y == WittVector::from_coords(R, {R->one(), R->zero(), R->one()}));
  CHECK(parse_witt(x.str(), x.ring()).ring() == x.ring());
  CHECK_THROWS_AS(parse_witt("W[p=3,N=3; 1,0,1]@Zmod(8)", nullptr), UsageError);
  CHECK_THROWS_AS(parse_witt("W[p=2,N=2; 1,0,1]@Zmod(8)", nullptr), UsageError);
  CHECK_THROWS_AS(parse_witt("1,0", nullptr), UsageError);
}

TEST_CASE("window spec files") {
  auto spec = parse_window_spec(
      "# extension\nframe = zink\nring = Series(Fp(2),e,2)\nsupport = 2\nh = 2\nd = 1\npsi = 1, 0; e, 1\n");
  CHECK(spec.h == 2);
  CHECK(spec.psi.size() == 2);
  auto w = build_window(spec);
  std::mt19937_64 g(1);
  CHECK(check_window(w, 2, g).ok());
  const auto& Z = std::static_pointer_cast<const ZinkFrame>(w.frame)->zink();
  CHECK(w.psi[1][0] == ZinkElement::from_m(Z, {Z->ring()->var("e")}));

  auto witt = parse_window_spec("frame = witt\nring = Fq(2,2)\nN = 2\nh = 1\nd = 0\npsi = z\n");
  auto ww = build_window(witt);
  CHECK(ww.frame->name() == "W_2(Fq(2,2))");
  CHECK(ww.psi[0][0].m().empty());

  CHECK_THROWS_AS(parse_window_spec("ring = Fp(2)\nh = 1\n"), UsageError);
  CHECK_THROWS_AS(parse_window_spec("ring = Fp(2)\nh = 2\nd = 1\npsi = 1\n"), UsageError);
  CHECK_THROWS_AS(parse_window_spec("ring = Fp(2)\ncolour = red\n"), UsageError);
  CHECK_THROWS_AS(build_window(parse_window_spec("ring = Fp(2)\nh = 1\nd = 1\npsi = 0\n")), PropertyViolation);
}

TEST_CASE("Zink entries read ring variables as Teichmueller lifts") {
  auto R = Ring::make(parse_descriptor("Series(Fp(3),e,2)"));
  auto Z = ZinkRing::make(R, 2);
  auto e = parse_zink_entry("e", Z);
  CHECK(e == ZinkElement::from_m(Z, {R->var("e")}));
  CHECK(parse_zink_entry("1 + 2*e", Z) ==
        zink_add(ZinkElement::one(Z), zink_mul(ZinkElement::from_int(Z, 2), e)));
  CHECK(parse_zink_entry("e^2", Z) == ZinkElement::zero(Z));
  CHECK_THROWS_AS(parse_zink_entry("q", Z), ParseError);
}

TEST_CASE("exit statuses by error category") {
  CHECK(run_args({"zink", "u0", "--M", "3", "--N", "3"}) == 0);
  CHECK(run_args({"rings", "parse", "Zmod(6)"}) == 3);
  CHECK(run_args({"rings", "frobnicate"}) == 3);
  CHECK(run_args({"groups", "torsion-match", "--ring", "Zmod(8)", "--schedule", "2,3"}) == 2);
  CHECK(run_args({"breuil", "kappa", "--sigma", "t^p+p*t", "--p", "3", "--ring", "Zmod(27)"}) == 0);
  CHECK(run_args({"frames", "check", "/nonexistent.window"}) == 3);
}

TEST_CASE("reports render deterministically") {
  Report r("zink u0");
  r.add("u0", "(7, 4, 0)");
  r.add_bool("exact", true);
  CHECK(r.render(Format::Lines) == "command: zink u0\nu0: (7, 4, 0)\nexact: yes\nstatus: ok\n");
  r.fail("made up");
  CHECK(r.failed());
  CHECK(r.render(Format::Lines).find("counterexample: made up\nstatus: violation\n") != std::string::npos);
  CHECK(r.render(Format::Human).find("VIOLATION") != std::string::npos);
}
