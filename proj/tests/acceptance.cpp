// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exits 0 only if all of them pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "difftaylor/checker.hpp"
#include "difftaylor/cli.hpp"
#include "difftaylor/diffpoly.hpp"
#include "difftaylor/polynomial.hpp"
#include "difftaylor/taylor.hpp"
#include "oracles.hpp"

namespace {

using namespace difftaylor;

struct Result {
  bool passed = false;
  std::string detail;
};

using QPoly = Polynomial<Rational>;
using PolyV = QPoly::value_type;

template <class Ring>
std::string series_line(const Ring& ring, const typename Ring::value_type& s) {
  std::string out;
  for (std::size_t k = 0; k < ring.indices().count_upto(s.valid); ++k) {
    if (ring.base().is_zero(s.coeffs[k])) continue;
    if (!out.empty()) out += " + ";
    out += "(" + ring.base().format(s.coeffs[k]) + ")t^" + std::to_string(ring.indices()[k][0]);
  }
  return out.empty() ? "0" : out;
}

// Direct evaluation of the twisted double sums for K = Q[u], delta(u) = 1,
// A = (Q[u], 0), phi = id, m = 1.
Result golden_twisted() {
  const QPoly k(Rational{}, {"u"});
  const auto target = make_differential_polynomial_ring(k, {{k.one()}});
  const auto source = DifferentialRing<QPoly>::constant(k, 1);
  const MorphismSpec<QPoly, QPoly> spec(source, target, [](const PolyV& x) { return x; }, 8);
  const auto u = k.generator(0);
  const auto th = twisted_hurwitz(spec, u);
  const auto tt = twisted_taylor(spec, u);

  std::ostringstream detail;
  bool ok = th.valid == 8 && tt.valid == 8;
  for (unsigned n = 0; n <= 8; ++n) {
    auto hurwitz_sum = k.zero();
    auto taylor_sum = k.zero();
    for (unsigned g = 0; g <= n; ++g) {
      BigInt c = oracle::choose(n, g);
      if (g % 2 == 1) c = -c;
      hurwitz_sum = k.add(hurwitz_sum, k.mul(k.from_integer(c), target.derive_iter(source.derive_iter(u, {n - g}), {g})));
      BigInt d = oracle::choose(n, g);
      if ((n - g) % 2 == 1) d = -d;
      taylor_sum = k.add(taylor_sum, k.mul(k.from_integer(d), target.derive_iter(source.derive_iter(u, {g}), {n - g})));
    }
    taylor_sum = k.mul(k.from_rational(mpq_class(1) / mpq_class(oracle::fact({n}))), taylor_sum);
    const auto expected = n == 0 ? u : n == 1 ? k.constant(-1) : k.zero();
    ok = ok && k.equal(hurwitz_sum, expected) && k.equal(taylor_sum, expected);
    ok = ok && k.equal(spec.hurwitz_ring().coeff(th, {n}), expected) &&
         k.equal(spec.power_series_ring().coeff(tt, {n}), expected);
  }
  detail << "twisted_hurwitz(u) = " << series_line(spec.hurwitz_ring(), th);
  return {ok, detail.str()};
}

Result golden_classical() {
  const DiffPolyRing<Rational> a(DifferentialRing<Rational>::constant(Rational{}, 1), {"x"});
  SymbolTable<mpq_class> table;
  for (unsigned n = 0; n <= 10; ++n) table.values.emplace(Symbol{0, {n}}, 1);
  const MorphismSpec<DiffPolyRing<Rational>, Rational> spec(
      differential(a), DifferentialRing<Rational>::constant(Rational{}, 1),
      [&](const DiffPolyRing<Rational>::value_type& f) { return dp_eval_hom(a, f, table); }, 10);
  const auto c = classical_taylor(spec, a.variable(0));
  const auto h = hurwitz_morphism(spec, a.variable(0));
  bool ok = c.valid == 10 && h.valid == 10;
  for (unsigned n = 0; n <= 10; ++n) {
    ok = ok && spec.power_series_ring().coeff(c, {n}) == mpq_class(1) / mpq_class(oracle::fact({n}));
    ok = ok && spec.hurwitz_ring().coeff(h, {n}) == 1;
  }
  ok = ok && spec.power_series_ring().equal(hw_to_divided(spec.hurwitz_ring(), h), c);
  return {ok, "classical(x) = " + series_line(spec.power_series_ring(), c)};
}

Result char_p_nilpotency() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (unsigned extra : {0U, 3U}) {
      const HurwitzRing<PrimeField> h(PrimeField(p), 1, static_cast<unsigned>(p) + extra);
      auto power = h.one();
      for (std::uint64_t j = 0; j + 1 < p; ++j) power = h.mul(power, h.variable(0));
      ok = ok && !h.is_zero(power);
      power = h.mul(power, h.variable(0));
      ok = ok && h.is_zero(power) && power.valid == h.trunc();
    }
    detail += "t^" + std::to_string(p) + " = 0 in H(F" + std::to_string(p) + "); ";
  }
  return {ok, detail};
}

// Runs one registered check and requires zero failures over at least
// `instances` instances.
Result suite(const std::string& check, std::size_t instances, std::vector<std::string> fields, std::size_t max_m = 2,
             unsigned max_trunc = 6) {
  CheckConfig config;
  config.seed = 20240601;
  config.checks = {check};
  config.instances = instances;
  config.bounds = Bounds{max_m, max_trunc, 2};
  config.fields = std::move(fields);
  const auto reports = run_suite(config);
  const auto& r = reports.at(0);
  std::string detail = check + ": " + std::to_string(r.instances) + " instances over";
  for (const auto& f : config.fields) detail += " " + f;
  detail += ", " + std::to_string(r.failures.size()) + " failures";
  if (!r.passed()) detail += "; first: " + r.to_json()["failures"][0].dump().substr(0, 400);
  return {r.passed() && r.instances >= instances, detail};
}

Result all_of(std::vector<Result> parts) {
  Result out{true, ""};
  for (const auto& p : parts) {
    out.passed = out.passed && p.passed;
    if (!out.detail.empty()) out.detail += " | ";
    out.detail += p.detail;
  }
  return out;
}

Result determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "difftaylor_acceptance";
  std::filesystem::create_directories(dir);
  const auto config = (dir / "config.json").string();
  std::ofstream(config) << R"({"seed": 11, "instances": 25, "max_trunc": 5})";
  std::string outputs[2];
  int codes[2];
  for (int run = 0; run < 2; ++run) {
    const auto out = (dir / ("report" + std::to_string(run) + ".jsonl")).string();
    const char* argv[] = {"difftaylor", "check", "--spec", config.c_str(), "--out", out.c_str()};
    std::ostringstream sink;
    codes[run] = run_cli(6, argv, sink, sink);
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    outputs[run] = buf.str();
  }
  std::filesystem::remove_all(dir);
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  return {same && codes[0] == kExitOk && codes[1] == kExitOk,
          std::to_string(outputs[0].size()) + " report bytes, identical: " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria{
      {"golden twisted expansion u - t", golden_twisted},
      {"golden classical and Hurwitz expansion of x", golden_classical},
      {"t^p = 0 in H(F_p) for p = 2, 3, 5", char_p_nilpotency},
      {"EV1: ev o T = phi for every constructor", [] { return suite("ev1", 200, {"Q", "F2", "F5"}); }},
      {"EV2: twisted Hurwitz of ev is the identity",
       [] { return all_of({suite("ev2", 100, {"Q"}), suite("ev2", 100, {"F3"})}); }},
      {"twists by commuting families compose", [] { return suite("lemma83", 100, {"Q", "F2", "F3", "F5"}); }},
      {"untwist inverts twist", [] { return suite("cor84", 100, {"Q", "F2", "F3", "F5"}); }},
      {"TM1 and TM2",
       [] { return all_of({suite("tm1", 100, {"Q", "F2", "F3", "F5"}), suite("tm2", 100, {"Q", "F2", "F3", "F5"})}); }},
      {"constructors are differential ring homomorphisms",
       [] { return suite("homomorphism", 200, {"Q", "F2", "F3", "F5"}); }},
      {"inversion of units over F3 and Q",
       [] { return all_of({suite("unit_inversion", 100, {"Q"}), suite("unit_inversion", 100, {"F3"})}); }},
      {"check reports are byte-identical across runs", determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.passed) ++failed;
    std::printf("%s %2zu  %-52s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
