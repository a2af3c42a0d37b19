#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "wz/groups.hpp"
#include "wz/universal.hpp"

namespace wz::cli {

namespace {

struct Options {
  Format format = Format::Lines;
  uint64_t seed = 1;
  int samples = 20;
};

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::vector<std::string> s;
  for (int x : v) s.push_back(std::to_string(x));
  return join(s, ",");
}

std::string coords(const WittVector& x) {
  std::vector<std::string> s;
  for (auto& c : x.coords()) s.push_back(x.ring()->show(c));
  return "(" + join(s) + ")";
}

void add_check(Report& r, const std::string& key, const CheckReport& c) {
  r.add(key, std::to_string(c.checked) + " checked, " + std::to_string(c.failures.size()) + " failed" +
                 (c.skipped ? ", " + std::to_string(c.skipped) + " skipped" : ""));
  if (!c.ok()) r.fail(key + ": " + c.failures.front());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RingPtr ring_arg(const std::string& text) { return Ring::make(parse_descriptor(text)); }

// ---------------------------------------------------------------------------
// rings

void rings_parse(Report& r, const std::string& text) {
  auto d = parse_descriptor(text);
  auto R = Ring::make(d);
  r.add("descriptor", d->str());
  r.add("name", R->name());
  r.add("p", R->p());
  r.add("characteristic", "p^" + std::to_string(R->char_exponent()));
  r.add("order", static_cast<long long>(R->order()));
  r.add("residue field", R->residue_field()->name());
  r.add("residue degree", R->residue_degree());
  r.add("nilpotency of m", R->nilpotency());
  r.add_bool("field", R->is_field());
}

void rings_check(Report& r, const std::string& text, const Options& o) {
  auto R = ring_arg(text);
  r.add("ring", R->name());
  auto all = R->elements();
  std::mt19937_64 g(o.seed);
  const bool exhaustive = all.size() <= 16;
  CheckReport c;
  auto pick = [&]() { return all[g() % all.size()]; };
  auto triple = [&](const RingElement& x, const RingElement& y, const RingElement& z) {
    c.expect((x * y) * z == x * (y * z), "associativity at " + R->show(x) + ", " + R->show(y) + ", " + R->show(z));
    c.expect(x * (y + z) == x * y + x * z, "distributivity at " + R->show(x) + ", " + R->show(y) + ", " + R->show(z));
    c.expect(x * y == y * x, "commutativity at " + R->show(x) + ", " + R->show(y));
  };
  if (exhaustive) {
    for (auto& x : all)
      for (auto& y : all)
        for (auto& z : all) triple(x, y, z);
  } else {
    for (int s = 0; s < o.samples; ++s) triple(pick(), pick(), pick());
  }
  r.add("mode", exhaustive ? "exhaustive" : std::to_string(o.samples) + " samples");
  add_check(r, "ring axioms", c);
  // local structure: units are exactly the elements outside m
  CheckReport loc;
  auto k = R->residue_field();
  for (auto& x : all) {
    loc.expect(R->is_unit(x) != R->in_max_ideal(x), "unit test disagrees with m at " + R->show(x));
    if (R->is_unit(x)) loc.expect(x * R->inverse(x) == R->one(), "inverse of " + R->show(x));
    loc.expect(R->residue(R->section(R->residue(x))) == R->residue(x), "section does not split at " + R->show(x));
  }
  uint64_t m_size = R->enumerate_ideal(1).size();
  loc.expect(m_size * k->order() == R->order(), "|m| |k| != |R|");
  add_check(r, "local structure", loc);
  r.add("|m|", static_cast<long long>(m_size));
}

void rings_eval(Report& r, const std::string& text, const std::string& expr) {
  auto R = ring_arg(text);
  r.add("ring", R->name());
  r.add("input", expr);
  auto x = R->parse(expr);
  r.add("value", R->show(x));
  r.add_bool("unit", R->is_unit(x));
  r.add_bool("in m", R->in_max_ideal(x));
}

// ---------------------------------------------------------------------------
// witt

void witt_check_identities(Report& r, uint32_t p, int N, const std::string& ring_text, const Options& o) {
  r.add("p", p);
  r.add("N", N);
  if (N < 1) throw UsageError("--N must be at least 1");
  // S_0..S_{N-1}, P_0..P_{N-1}
  auto U = universal_polynomials(p, N - 1);
  auto err = verify_universal_identities(*U);
  r.add("universal polynomials", err.empty() ? "S_0..S_" + std::to_string(N - 1) + ", P_0..P_" +
                                                   std::to_string(N - 1) + " satisfy the ghost identities"
                                             : err);
  if (!err.empty()) r.fail("universal polynomials: " + err);
  if (ring_text.empty()) return;
  auto R = ring_arg(ring_text);
  if (R->p() != p) throw UsageError("ring " + R->name() + " has residue characteristic " + std::to_string(R->p()));
  r.add("ring", R->name());
  auto all = R->elements();
  std::mt19937_64 g(o.seed);
  auto random_w = [&](int n) {
    std::vector<RingElement> c;
    for (int i = 0; i < n; ++i) c.push_back(all[g() % all.size()]);
    return WittVector::from_coords(R, c);
  };
  auto add_vec = [&](const std::vector<RingElement>& a, const std::vector<RingElement>& b, bool mul) {
    std::vector<RingElement> out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(mul ? a[i] * b[i] : a[i] + b[i]);
    return out;
  };
  CheckReport ghost_c, fv, vxy, teich;
  for (int s = 0; s < o.samples; ++s) {
    auto x = random_w(N), y = random_w(N);
    ghost_c.expect(ghost(x + y) == add_vec(ghost(x), ghost(y), false), "w(x + y) at " + x.str() + ", " + y.str());
    ghost_c.expect(ghost(x * y) == add_vec(ghost(x), ghost(y), true), "w(x y) at " + x.str() + ", " + y.str());
    if (N >= 2) {
      auto x1 = x.truncate(N - 1);
      fv.expect(frobenius(verschiebung(x1)) == witt_scale(x1, p), "f v != p at " + x1.str());
      vxy.expect(verschiebung(x1) * y == verschiebung(x1 * frobenius(y)), "v(x) y != v(x f(y)) at " + x1.str());
    }
    auto a = all[g() % all.size()], b = all[g() % all.size()];
    teich.expect(WittVector::teichmuller(R, N, a) * WittVector::teichmuller(R, N, b) ==
                     WittVector::teichmuller(R, N, a * b),
                 "[a][b] != [ab] at " + R->show(a) + ", " + R->show(b));
  }
  r.add("samples", o.samples);
  add_check(r, "ghost homomorphism", ghost_c);
  add_check(r, "f v = p", fv);
  add_check(r, "v(x) y = v(x f(y))", vxy);
  add_check(r, "teichmuller multiplicative", teich);
}

void witt_op(Report& r, const std::string& op, const std::vector<std::string>& args, const std::string& ring_text) {
  RingPtr R = ring_text.empty() ? nullptr : ring_arg(ring_text);
  std::vector<WittVector> xs;
  for (auto& a : args) {
    xs.push_back(parse_witt(a, R));
    R = xs.back().ring();
  }
  auto need = [&](size_t n) {
    if (xs.size() != n) throw UsageError("witt op " + op + " takes " + std::to_string(n) + " operand(s)");
  };
  for (size_t i = 0; i < xs.size(); ++i) r.add("x" + std::to_string(i), xs[i].str());
  WittVector out;
  if (op == "add" || op == "sub" || op == "mul") {
    need(2);
    if (xs[0].ring() != xs[1].ring()) throw UsageError("operands live over different rings");
    if (xs[0].length() != xs[1].length()) throw UsageError("operands have different lengths");
    const auto& y = xs[1];
    out = op == "add" ? xs[0] + y : op == "sub" ? xs[0] - y : xs[0] * y;
  } else if (op == "neg") {
    need(1);
    out = witt_neg(xs[0]);
  } else if (op == "f") {
    need(1);
    out = frobenius(xs[0]);
  } else if (op == "v") {
    need(1);
    out = verschiebung(xs[0]);
  } else if (op == "inverse") {
    need(1);
    out = witt_inverse(xs[0]);
  } else if (op == "ghost") {
    need(1);
    std::vector<std::string> s;
    for (auto& w : ghost(xs[0])) s.push_back(xs[0].ring()->show(w));
    r.add("ghost", "(" + join(s) + ")");
    return;
  } else {
    throw UsageError("unknown witt op '" + op + "' (add, sub, mul, neg, f, v, inverse, ghost)");
  }
  r.add("result", out.str());
}

// ---------------------------------------------------------------------------
// zink

void zink_u0(Report& r, uint32_t p, int M, int N) {
  auto R = Ring::make(RingDescriptor::zmod(p, M));
  auto u = compute_u0(R, N);
  r.add("ring", R->name());
  r.add("N", N);
  r.add("u0", coords(u));
  r.add("u0 mod p", coords(WittVector::from_coords(R->residue_field(), [&] {
          std::vector<RingElement> c;
          for (auto& x : u.coords()) c.push_back(R->residue(x));
          return c;
        }())));
  if (p == 2) {
    auto lhs = verschiebung(u);
    auto rhs = WittVector::from_int(R, N + 1, 2) - WittVector::teichmuller(R, N + 1, R->from_int(2));
    const bool ok = lhs == rhs;
    r.add("v(u0) = 2 - [2]", ok ? "exact in W_" + std::to_string(N + 1) : "fails");
    if (!ok) r.fail("v(u0) = " + lhs.str() + " but 2 - [2] = " + rhs.str());
  } else {
    r.add("u0 = 1", u == WittVector::one(R, N) ? "yes" : "no");
    if (u != WittVector::one(R, N)) r.fail("u0 != 1 for odd p");
  }
}

void zink_c0(Report& r, uint32_t p, int M, int N) {
  auto R = Ring::make(RingDescriptor::zmod(p, M));
  auto res = compute_c0(R, N);
  r.add("ring", R->name());
  r.add("N", N);
  r.add("c0", coords(res.c0));
  r.add("factors", res.factors);
  r.add("stable for", res.stable_for);
  if (N >= 2) {
    auto lhs = witt_mul(res.c0.truncate(N - 1), witt_inverse(frobenius(res.c0)));
    auto u = compute_u0(R, N - 1);
    const bool ok = lhs == u;
    r.add("c0 f(c0)^-1 = u0", ok ? "exact in W_" + std::to_string(N - 1) : "fails");
    if (!ok) r.fail("c0 f(c0)^-1 = " + lhs.str() + " but u0 = " + u.str());
  }
  bool one_mod_p = true;
  for (int i = 0; i < res.c0.length(); ++i)
    one_mod_p &= R->residue(res.c0[i]) == R->residue_field()->from_int(i == 0);
  r.add_bool("c0 = 1 in W(k)", one_mod_p);
  if (!one_mod_p) r.fail("c0 does not reduce to 1");
}

void zink_quotient(Report& r, const std::string& ring_text, int B) {
  auto Z = ZinkRing::make(ring_arg(ring_text), B);
  r.add("zink ring", Z->name());
  auto q = stabilized_quotient_check(Z);
  r.add("dimension", q.dimension);
  r.add("reason", q.reason);
  r.add("tested length", q.tested_length);
  std::vector<std::string> w;
  for (int i : q.witness_index) w.push_back(std::to_string(i));
  if (!w.empty()) r.add("witness index", join(w));
  if (q.two_v1_support >= 0) r.add("support of 2 v(1)", q.two_v1_support);
  if (q.dimension > 0) {
    r.add_bool("f1bar(v(1)) = v(1)", q.f1bar_fixes_v1);
    r.add("support of u0^-1 - v(1)", q.f1bar_support);
    r.add("note", "v(1) outside W(R) is certified up to the tested length only");
    if (!q.f1bar_fixes_v1) r.fail("f1bar does not fix v(1)");
  }
}

void zink_check(Report& r, const std::string& ring_text, int B, const Options& o) {
  auto F = ZinkFrame::make(ring_arg(ring_text), B);
  const auto& Z = F->zink();
  r.add("zink ring", Z->name());
  std::mt19937_64 g(o.seed);
  CheckReport ring, frob, fv;
  for (int s = 0; s < o.samples; ++s) {
    auto x = F->random(g), y = F->random(g), z = F->random(g);
    ring.expect((x * y) * z == x * (y * z), "associativity at " + x.str());
    ring.expect(x * (y + z) == x * y + x * z, "distributivity at " + x.str());
    ring.expect(x - x == ZinkElement::zero(Z), "x - x != 0 at " + x.str());
    frob.expect(zink_f(x * y) == zink_f(x) * zink_f(y), "f not multiplicative at " + x.str());
    frob.expect(zink_f(x + y) == zink_f(x) + zink_f(y), "f not additive at " + x.str());
    frob.expect(zink_v(x) * y == zink_v(x * zink_f(y)), "v(x) y != v(x f(y)) at " + x.str());
    auto vx = zink_v(x);
    fv.expect(zink_in_ideal(vx), "v(x) outside the ideal at " + x.str());
    fv.expect(zink_f1(vx) == x, "f1(v(x)) != x at " + x.str());
    auto w = F->random_ideal(g);
    fv.expect(zink_v(zink_f1(w)) == w, "v(f1(w)) != w at " + w.str());
  }
  r.add("samples", o.samples);
  add_check(r, "ring axioms", ring);
  add_check(r, "frobenius", frob);
  add_check(r, "f1 v = id, v f1 = id", fv);
  add_check(r, "frame axioms", check_frame(*F, o.samples, g));
}

// ---------------------------------------------------------------------------
// frames

void frames_check(Report& r, const std::string& path, const Options& o) {
  auto spec = read_window_spec(path);
  auto w = build_window(spec);
  r.add("frame", w.frame->name());
  r.add("h", w.h);
  r.add("d", w.d);
  r.add("psi", mat_show(*w.frame, w.psi));
  std::mt19937_64 g(o.seed);
  add_check(r, "frame axioms", check_frame(*w.frame, o.samples, g));
  add_check(r, "window axioms", check_window(w, o.samples, g));
}

void frames_invariants(Report& r, const std::string& path, int level) {
  auto w = build_window(read_window_spec(path));
  const auto& F = *w.frame;
  r.add("frame", F.name());
  auto T = invariants(w, 2e5, level);
  r.add("level", T.level);
  r.add("method", T.method);
  r.add("candidates", static_cast<long long>(T.candidates));
  r.add("order", static_cast<long long>(T.order()));
  std::vector<std::string> ord;
  for (auto o : T.generator_orders) ord.push_back(std::to_string(o));
  std::vector<std::string> factors;
  uint64_t prod = 1;
  for (auto o : T.generator_orders) prod *= o;
  r.add("generator orders", ord.empty() ? "none" : join(ord));
  for (size_t i = 0; i < T.generators.size(); ++i) r.add("generator " + std::to_string(i), vec_show(F, T.generators[i]));
  r.add_bool("cross checked", T.cross_checked);
  if (prod != T.order()) r.fail("generator orders multiply to " + std::to_string(prod));
}

void frames_dual(Report& r, const std::string& path, const Options& o) {
  auto w = build_window(read_window_spec(path));
  const auto& F = *w.frame;
  auto wt = dual(w);
  r.add("frame", F.name());
  r.add("dual h", wt.h);
  r.add("dual d", wt.d);
  r.add("dual psi", mat_show(F, wt.psi));
  std::mt19937_64 g(o.seed);
  add_check(r, "dual window axioms", check_window(wt, o.samples, g));
  auto gamma = dual_pairing(w);
  add_check(r, "pairing identity", check_bilinear(gamma, o.samples, g));
  const bool perfect = is_perfect(gamma);
  r.add_bool("perfect", perfect);
  if (!perfect) r.fail("pairing is not perfect");
}

void frames_basechange(Report& r, const std::string& map, const std::string& path, const Options& o) {
  auto spec = read_window_spec(path);
  auto w = build_window(spec);
  auto F = std::static_pointer_cast<const ZinkFrame>(w.frame);
  std::mt19937_64 g(o.seed);
  r.add("map", map);
  r.add("source", F->name());
  auto report_target = [&](const auto& m, const auto& w2) {
    r.add("target", m.target->name());
    r.add("psi'", mat_show(*m.target, w2.psi));
    add_check(r, "map axioms", check_map(m, o.samples, g));
    add_check(r, "base-changed window", check_window(w2, o.samples, g));
    if (!m.c) {
      r.add("base-changed pairing", "skipped: the map has no unit c");
      return;
    }
    // the pairing w x w^t -> unit, base changed with c^{-1}
    auto g1 = base_change_form(m, dual_pairing(w));
    add_check(r, "base-changed pairing", check_bilinear(g1, o.samples, g));
    const bool perfect = is_perfect(g1);
    r.add_bool("base-changed pairing perfect", perfect);
    if (!perfect) r.fail("base-changed pairing is not perfect");
    const auto& T = *m.target;
    if (T.eq(m.u, T.one())) {
      const bool same = mat_eq(T, base_change(m, dual(w)).psi, dual(w2).psi);
      r.add_bool("dual commutes with base change", same);
      if (!same) r.fail("base change of the dual differs from the dual of the base change");
    }
  };
  if (map == "id") {
    auto m = identity_map<ZinkElement>(F);
    report_target(m, base_change(m, w));
  } else if (map == "sigma") {
    FramePtr<ZinkElement> P = F;
    FrameMap<ZinkElement, ZinkElement> m{P, P, [F](const ZinkElement& x) { return F->sigma(x); }, F->one(), F->one(),
                                         "sigma"};
    report_target(m, base_change(m, w));
  } else if (map == "iota") {
    if (F->p() != 2) throw UsageError("iota needs p = 2");
    auto Dp = std::make_shared<ZinkPlusFrame>(F->zink());
    auto m = iota_map(F, Dp);
    report_target(m, base_change(m, w));
  } else {
    throw UsageError("unknown map '" + map + "' (id, sigma, iota)");
  }
}

// ---------------------------------------------------------------------------
// breuil

struct KappaArgs {
  std::string sigma = "t^p", E = "p-t", ring, pi = "p";
  uint32_t p = 0;
  int N = 0, M = 0;
};

struct KappaSetup {
  SPtr S;
  FrobeniusLift s;
  SElem E;
  RingPtr R;
  RingElement pi;
};

KappaSetup kappa_setup(Report& r, const KappaArgs& a) {
  KappaSetup k;
  k.R = ring_arg(a.ring);
  const uint32_t p = a.p ? a.p : k.R->p();
  if (p != k.R->p()) throw UsageError("--p does not match the ring");
  k.pi = k.R->parse(a.pi);
  int M = a.M;
  if (M == 0) {
    int e = 1;
    auto x = k.pi;
    while (!x.is_zero()) {
      x = x * k.pi;
      if (++e > 64) throw UsageError("pi is not nilpotent");
    }
    M = std::max(3, e);
  }
  const int N = a.N ? a.N : std::max(3, k.R->char_exponent() + 3);
  k.S = SRing::make(Ring::make(RingDescriptor::fp(p)), N, M);
  k.s = FrobeniusLift::parse(k.S, a.sigma);
  k.E = distinguished(k.S, a.E);
  r.add("S", k.S->name());
  r.add("sigma(t)", k.s.str());
  r.add("E", k.E.str());
  r.add("R", k.R->name());
  r.add("pi", k.R->show(k.pi));
  return k;
}

void breuil_delta(Report& r, const std::string& sigma, uint32_t p, int n, int N, int M, const std::string& xs) {
  if (n < 1) throw UsageError("--n must be at least 1");
  const int NN = N ? N : std::max(3, n + 1);
  auto S = SRing::make(Ring::make(RingDescriptor::fp(p)), NN, M ? M : std::max<int>(3, p + 1));
  auto s = FrobeniusLift::parse(S, sigma);
  auto x = SElem::parse(S, xs);
  r.add("S", S->name());
  r.add("sigma(t)", s.str());
  r.add("x", x.str());
  auto d = delta(s, x, n);
  for (size_t i = 0; i < d.size(); ++i) r.add("delta_" + std::to_string(i), d[i].str());
  add_check(r, "recursion", check_delta(s, x, n));
  r.add_bool("p^2 divides sigma(t)'s linear coefficient", s.p2_criterion());
}

void breuil_kappa(Report& r, const KappaArgs& a) {
  auto k = kappa_setup(r, a);
  Kappa kap(k.s, k.E, k.R, k.pi);
  r.add("kappa(t)", coords(kap.kappa_t()));
  r.add("tested length", kap.tested_length());
  r.add("support", kap.support());
  r.add("verdict", kap.verdict());
  r.add("p^2 criterion", kap.criterion() ? "in Zink ring" : "not in Zink ring");
  if (kap.in_zink() != kap.criterion()) r.fail("verdict disagrees with the p^2 criterion");
}

void breuil_units(Report& r, const KappaArgs& a) {
  auto k = kappa_setup(r, a);
  Kappa kap(k.s, k.E, k.R, k.pi);
  r.add("verdict", kap.verdict());
  if (!kap.in_zink()) throw UsageError("kappa does not land in the Zink ring; units u, c are undefined");
  auto U = units_u_c(kap);
  r.add("u", U.u.str());
  r.add("c", U.c.str());
  r.add("factors", U.factors);
  r.add("stable for", U.stable_for);
  add_check(r, "defining identities", check_units(kap, U));
}

void breuil_tower(Report& r, const std::string& sigma, uint32_t p, const std::string& base, const std::string& pi,
                  int depth, int N, int M) {
  int pd = 1;
  for (int i = 0; i < depth; ++i) pd *= int(p);
  auto S = SRing::make(Ring::make(RingDescriptor::fp(p)), N ? N : 8, M ? M : std::max(3, pd + 1));
  auto s = FrobeniusLift::parse(S, sigma);
  auto d = parse_descriptor(base.empty() ? "Zmod(" + std::to_string(p) + "^2)" : base);
  r.add("sigma(t)", s.str());
  r.add("base", d->str());
  r.add("depth", depth);
  auto rep = tower_identity_check(s, d, pi.empty() ? std::to_string(p) : pi, depth);
  for (size_t i = 0; i < rep.rings.size(); ++i) r.add("R_" + std::to_string(i), rep.rings[i]->name());
  for (auto& line : rep.lines) r.add("identity", line);
  add_check(r, "tower identities", rep.checks);
}

void breuil_window(Report& r, const std::string& path, const Options& o) {
  auto spec = parse_breuil_spec(read_file(path));
  auto S = SRing::make(Ring::make(spec.k), spec.N, spec.M);
  auto B = std::make_shared<BreuilFrame>(FrobeniusLift::parse(S, spec.sigma), distinguished(S, spec.E));
  auto mat = [&](const std::vector<std::vector<std::string>>& m) {
    Matrix<SElem> out;
    for (auto& row : m) {
      Vector<SElem> v;
      for (auto& x : row) v.push_back(SElem::parse(S, x));
      out.push_back(v);
    }
    return out;
  };
  BreuilWindowData data{spec.h, spec.d, mat(spec.phi), mat(spec.psi)};
  r.add("frame", B->name());
  r.add("phi", mat_show(*B, data.phi));
  r.add("psi", mat_show(*B, data.psi));
  add_check(r, "Breuil window", check_breuil(*B, data));
  auto w = breuil_to_window(B, data);
  std::mt19937_64 g(o.seed);
  add_check(r, "window axioms", check_window(w, o.samples, g));
  auto back = window_to_breuil(w);
  const bool same = mat_eq(*B, back.phi, data.phi) && mat_eq(*B, back.psi, data.psi);
  r.add_bool("round trip", same);
  if (!same) r.fail("window -> Breuil -> window changed (phi, psi)");
}

// ---------------------------------------------------------------------------
// groups

std::vector<int> schedule_arg(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad schedule entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty schedule");
  return out;
}

void groups_bt(Report& r, const std::string& example, const std::string& ring_text, const std::string& sched) {
  auto ex = GroupExample::parse(example);
  auto R = ring_arg(ring_text);
  r.add("example", ex.str());
  r.add("ring", R->name());
  r.add("schedule", join_ints(schedule_arg(sched)));
  std::function<Window<ZinkElement>(int)> make = [&](int B) { return realize(ex, ZinkFrame::make(R, B)); };
  std::function<int(const Window<ZinkElement>&)> lvl = [](const Window<ZinkElement>& w) {
    return w.frame->min_level();
  };
  auto bt = bt_kernel_cokernel(make, lvl, schedule_arg(sched));
  for (size_t i = 0; i < bt.runs.size(); ++i) {
    const auto& k = bt.runs[i];
    r.add("B=" + std::to_string(bt.bounds[i]), "level " + std::to_string(k.level_in) + ", |ker| " +
                                                    std::to_string(k.kernel) + ", |coker| " +
                                                    std::to_string(k.coker_order()) + " (" + type_str(k.coker_type) + ")");
  }
  r.add("kernel", type_str(bt.result.ker_type));
  r.add("cokernel", type_str(bt.result.coker_type));
  r.add("certificate", bt.certificate);
}

void groups_torsion_match(Report& r, const std::string& example, const std::string& ring_text, const std::string& sched) {
  auto ex = GroupExample::parse(example);
  auto R = ring_arg(ring_text);
  r.add("example", ex.str());
  r.add("ring", R->name());
  auto tm = torsion_match(ex, R, schedule_arg(sched));
  for (auto& l : tm.lines) {
    auto c = l.find(": ");
    if (c == std::string::npos) r.add("line", l);
    else r.add(l.substr(0, c), l.substr(c + 2));
  }
  r.add("expected", tm.expected);
  r.add("computed", tm.computed);
  if (!tm.ok) r.fail("expected " + tm.expected + ", computed " + tm.computed);
}

void groups_plus_check(Report& r, const std::string& example, const std::string& ring_text, int B, const Options& o) {
  auto ex = GroupExample::parse(example);
  auto F = ZinkFrame::make(ring_arg(ring_text), B);
  r.add("example", ex.str());
  r.add("frame", F->name());
  std::mt19937_64 g(o.seed);
  auto pc = plus_variant_diagram_check(realize(ex, F), o.samples, g);
  if (pc.trivial) {
    r.add("result", "p odd: W+ = W, nothing to check");
    return;
  }
  add_check(r, "c0 (F1 - 1) = (F1+ - 1) c0", pc.identity);
  r.add("W+/W dimension", pc.quotient_dimension);
  if (pc.quotient_dimension == 0) return;
  r.add_bool("f1bar(v(1)) = v(1)", pc.f1bar_fixes_v1);
  r.add("ker(F1bar - 1) dimension", pc.kernel_dimension);
  r.add("multiplicative height", ex.multiplicative_height());
  if (!pc.f1bar_fixes_v1) r.fail("f1bar does not fix v(1)");
}

void groups_pairing(Report& r, const std::string& example, const std::string& ring_text, int N, int B) {
  auto ex = GroupExample::parse(example);
  auto R = ring_arg(ring_text);
  auto F = R->is_field() ? ZinkFrame::witt(R, N) : ZinkFrame::make(R, B);
  r.add("example", ex.str());
  r.add("frame", F->name());
  auto pc = invariants_pairing_check(realize(ex, F));
  r.add("|T|", static_cast<long long>(pc.t_order));
  r.add("|T dual|", static_cast<long long>(pc.dual_order));
  for (size_t i = 0; i < pc.matrix.size(); ++i)
    if (!pc.matrix[i].empty()) r.add("pairing row " + std::to_string(i), join(pc.matrix[i], " | "));
  r.add_bool("values invariant", pc.values_invariant);
  r.add_bool("bilinear", pc.bilinear);
  r.add_bool("degenerate at this level", pc.degenerate);
  r.add_bool("perfect", pc.perfect);
  if (!pc.values_invariant || !pc.bilinear) r.fail("pairing of invariants is not invariant and bilinear");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"exact Witt vector, Zink ring, frame and window computations", "wz"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  std::string format = "lines";
  app.add_option("--format", format, "lines | human")->check(CLI::IsMember({"lines", "human"}));
  app.add_option("--seed", o.seed, "seed for all sampling");
  app.add_option("--samples", o.samples, "random samples per property");

  std::string command;
  std::function<void(Report&)> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->parse_complete_callback([&command, parent, name] { command = parent->get_name() + " " + name; });
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->fallthrough();
    g->require_subcommand(1);
    return g;
  };

  // rings
  auto* rings = group("rings", "ring descriptors and local structure");
  std::string desc, expr;
  auto* rp = leaf(rings, "parse", "parse a descriptor and print the ring");
  rp->add_option("descriptor", desc)->required();
  rp->final_callback([&] { action = [&](Report& r) { rings_parse(r, desc); }; });
  auto* rc = leaf(rings, "check", "ring axioms and local structure");
  rc->add_option("descriptor", desc)->required();
  rc->final_callback([&] { action = [&](Report& r) { rings_check(r, desc, o); }; });
  auto* re = leaf(rings, "eval", "evaluate an expression in a ring");
  re->add_option("descriptor", desc)->required();
  re->add_option("expression", expr)->required();
  re->final_callback([&] { action = [&](Report& r) { rings_eval(r, desc, expr); }; });

  // witt
  auto* witt = group("witt", "truncated Witt vectors");
  uint32_t p = 2;
  int N = 3, M = 3, support = 4, n = 3, depth = 2, level = -1;
  std::string ring_text, op;
  std::vector<std::string> operands;
  auto* wc = leaf(witt, "check-identities", "universal polynomials and Witt ring identities");
  wc->add_option("--p", p)->required();
  wc->add_option("--N", N, "Witt length")->capture_default_str();
  wc->add_option("--ring", ring_text, "ring for the sampled identities");
  wc->final_callback([&] { action = [&](Report& r) { witt_check_identities(r, p, N, ring_text, o); }; });
  auto* wo = leaf(witt, "op", "add, sub, mul, neg, f, v, inverse, ghost");
  wo->add_option("op", op)->required();
  wo->add_option("operands", operands)->required();
  wo->add_option("--ring", ring_text, "ring for bare coordinate lists");
  wo->final_callback([&] { action = [&](Report& r) { witt_op(r, op, operands, ring_text); }; });

  // zink
  auto* zink = group("zink", "Zink rings, u0, c0 and W+");
  auto* zu = leaf(zink, "u0", "u0 in W_N(Z/p^M)");
  zu->add_option("--p", p)->capture_default_str();
  zu->add_option("--M", M, "coefficients Z/p^M")->capture_default_str();
  zu->add_option("--N", N, "Witt length")->capture_default_str();
  zu->final_callback([&] { action = [&](Report& r) { zink_u0(r, p, M, N); }; });
  auto* zc = leaf(zink, "c0", "c0 = u0 f(u0) f^2(u0) ... in W_N(Z/p^M)");
  zc->add_option("--p", p)->capture_default_str();
  zc->add_option("--M", M, "coefficients Z/p^M")->capture_default_str();
  zc->add_option("--N", N, "Witt length")->capture_default_str();
  zc->final_callback([&] { action = [&](Report& r) { zink_c0(r, p, M, N); }; });
  auto* zq = leaf(zink, "quotient", "dimension of W+(R)/W(R) and f1bar(v(1))");
  zq->add_option("--ring", ring_text)->required();
  zq->add_option("--support", support, "support bound B")->capture_default_str();
  zq->final_callback([&] { action = [&](Report& r) { zink_quotient(r, ring_text, support); }; });
  auto* zk = leaf(zink, "check", "ring, Frobenius and f1 v = id properties");
  zk->add_option("--ring", ring_text)->required();
  zk->add_option("--support", support, "support bound B")->capture_default_str();
  zk->final_callback([&] { action = [&](Report& r) { zink_check(r, ring_text, support, o); }; });

  // frames
  auto* frames = group("frames", "frames and windows from spec files");
  std::string file, map;
  auto* fc = leaf(frames, "check", "frame and window axioms");
  fc->add_option("file", file)->required();
  fc->final_callback([&] { action = [&](Report& r) { frames_check(r, file, o); }; });
  auto* fi = leaf(frames, "invariants", "T(P) = ker(F1 - 1 on Q) at a finite level");
  fi->add_option("file", file)->required();
  fi->add_option("--level", level, "level (default: the frame's minimum)");
  fi->final_callback([&] { action = [&](Report& r) { frames_invariants(r, file, level); }; });
  auto* fd = leaf(frames, "dual", "dual window and pairing");
  fd->add_option("file", file)->required();
  fd->final_callback([&] { action = [&](Report& r) { frames_dual(r, file, o); }; });
  auto* fb = leaf(frames, "basechange", "base change along id, sigma or iota");
  fb->add_option("map", map)->required();
  fb->add_option("file", file)->required();
  fb->final_callback([&] { action = [&](Report& r) { frames_basechange(r, map, file, o); }; });

  // breuil
  auto* breuil = group("breuil", "Breuil-Kisin frames, delta and kappa");
  KappaArgs ka;
  std::string x_text = "t", base, pi;
  auto* bd = leaf(breuil, "delta", "delta(x) in W(S)");
  bd->add_option("--sigma", ka.sigma)->capture_default_str();
  bd->add_option("--p", p)->required();
  bd->add_option("--n", n, "number of coordinates")->capture_default_str();
  bd->add_option("--N", ka.N, "p-adic precision of S (default max(3, n + 1))");
  int delta_M = 0;
  bd->add_option("--M", delta_M, "t-adic precision of S (default max(3, p + 1))");
  bd->add_option("--x", x_text, "element of S")->capture_default_str();
  bd->final_callback([&] { action = [&](Report& r) { breuil_delta(r, ka.sigma, p, n, ka.N, delta_M, x_text); }; });
  for (auto [name, help] : {std::pair<std::string, std::string>{"kappa", "kappa(t) and the Zink ring verdict"},
                            {"units", "the units u and c of kappa"}}) {
    auto* b = leaf(breuil, name, help);
    b->add_option("--sigma", ka.sigma)->capture_default_str();
    b->add_option("--p", ka.p, "residue characteristic (checked against the ring)");
    b->add_option("--ring", ka.ring)->required();
    b->add_option("--E", ka.E)->capture_default_str();
    b->add_option("--pi", ka.pi, "image of t in R")->capture_default_str();
    b->add_option("--N", ka.N, "p-adic precision of S (default max(3, a + 3))");
    b->add_option("--M", ka.M, "t-adic precision of S (default max(3, nilpotency of pi))");
    const bool is_kappa = name == "kappa";
    b->final_callback([&, is_kappa] {
      action = [&, is_kappa](Report& r) { is_kappa ? breuil_kappa(r, ka) : breuil_units(r, ka); };
    });
  }
  auto* bt = leaf(breuil, "tower-check", "tower identities over R_0 = base");
  bt->add_option("--sigma", ka.sigma)->capture_default_str();
  bt->add_option("--p", p)->required();
  bt->add_option("--base", base, "base ring (default Zmod(p^2))");
  bt->add_option("--pi", pi, "x_0 (default p)");
  bt->add_option("--depth", depth)->capture_default_str();
  bt->add_option("--N", ka.N, "p-adic precision of S (default 8)");
  bt->add_option("--M", ka.M, "t-adic precision of S (default max(3, p^depth + 1))");
  bt->final_callback(
      [&] { action = [&](Report& r) { breuil_tower(r, ka.sigma, p, base, pi, depth, ka.N, ka.M); }; });
  auto* bw = leaf(breuil, "window", "Breuil window file: check and round trip");
  bw->add_option("file", file)->required();
  bw->final_callback([&] { action = [&](Report& r) { breuil_window(r, file, o); }; });

  // groups
  auto* groups = group("groups", "T_p(G) = ker(F1 - 1 on Q) at finite levels");
  std::string example = "mu", schedule = "1,2,3,4";
  auto* gb = leaf(groups, "bt", "kernel and cokernel of F1 - 1 along a support schedule");
  gb->add_option("--example", example)->capture_default_str();
  gb->add_option("--ring", ring_text)->required();
  gb->add_option("--schedule", schedule, "support bounds")->capture_default_str();
  gb->final_callback([&] { action = [&](Report& r) { groups_bt(r, example, ring_text, schedule); }; });
  auto* gt = leaf(groups, "torsion-match", "coker(F1 - 1) against 1 + m, |ker| = |coker| for etale");
  gt->add_option("--example", example)->capture_default_str();
  gt->add_option("--ring", ring_text)->required();
  gt->add_option("--schedule", schedule, "support bounds, or precisions N over a field")->capture_default_str();
  gt->final_callback([&] { action = [&](Report& r) { groups_torsion_match(r, example, ring_text, schedule); }; });
  auto* gp = leaf(groups, "plus-check", "c0 (F1 - 1) = (F1+ - 1) c0 and the v(1) line");
  gp->add_option("--example", example)->capture_default_str();
  gp->add_option("--ring", ring_text)->required();
  gp->add_option("--support", support, "support bound B")->capture_default_str();
  gp->final_callback([&] { action = [&](Report& r) { groups_plus_check(r, example, ring_text, support, o); }; });
  auto* gq = leaf(groups, "pairing", "pairing between T(P) and T(P dual)");
  gq->add_option("--example", example)->capture_default_str();
  gq->add_option("--ring", ring_text)->required();
  gq->add_option("--N", N, "Witt length over a field")->capture_default_str();
  gq->add_option("--support", support, "support bound B")->capture_default_str();
  gq->final_callback([&] { action = [&](Report& r) { groups_pairing(r, example, ring_text, N, support); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(ErrorKind::Usage);
  }
  if (!action) {
    std::cerr << "error: no command\n";
    return exit_status(ErrorKind::Usage);
  }
  const Format fmt = format == "human" ? Format::Human : Format::Lines;
  Report report(command);
  try {
    action(report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return exit_status(ErrorKind::Violation);
  }
  std::cout << report.render(fmt);
  return report.failed() ? exit_status(ErrorKind::Violation) : 0;
}

}  // namespace wz::cli
