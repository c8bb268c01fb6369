#include "difftaylor/checker.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "difftaylor/diffpoly.hpp"
#include "difftaylor/errors.hpp"
#include "difftaylor/generators.hpp"
#include "difftaylor/hurwitz.hpp"
#include "difftaylor/polynomial.hpp"
#include "difftaylor/serialize.hpp"
#include "difftaylor/taylor.hpp"

namespace difftaylor {
namespace {

using OJ = nlohmann::ordered_json;

template <class F>
using Poly = Polynomial<F>;
template <class F>
using PolyV = typename Polynomial<F>::value_type;
template <class F>
using DP = DiffPolyRing<Polynomial<F>>;
template <class F>
using DPV = typename DiffPolyRing<Polynomial<F>>::value_type;

struct Outcome {
  bool ok = true;
  OJ inputs;
  OJ expected;
  OJ actual;
  int order = -1;
};

struct Instance {
  Rng rng;
  FieldSpec field;
  Bounds bounds;
};

template <class R>
OJ render(const R& ring, const typename R::value_type& v) {
  return ring.format(v);
}

template <class R, SeriesConvention C>
OJ render(const TruncatedSeriesRing<R, C>& ring, const Series<typename R::value_type>& v) {
  return series_to_json(ring, v);
}

// Accumulates the identities checked on one instance and keeps the first
// that fails.
class Verdict {
 public:
  explicit Verdict(OJ inputs) { out_.inputs = std::move(inputs); }

  bool failed() const { return !out_.ok; }

  template <class S>
  void series(const std::string& identity, const S& ring, const typename S::value_type& expected,
              const typename S::value_type& actual, unsigned order) {
    if (failed()) return;
    if (expected.valid < order || actual.valid < order) {
      fail(identity, render(ring, expected), render(ring, actual), static_cast<int>(order),
           "valid order below the required comparison order");
      return;
    }
    if (!ring.equal_upto(expected, actual, order)) {
      fail(identity, render(ring, expected), render(ring, actual), static_cast<int>(order));
    }
  }

  template <class R>
  void element(const std::string& identity, const R& ring, const typename R::value_type& expected,
               const typename R::value_type& actual) {
    if (failed()) return;
    if (!ring.equal(expected, actual)) fail(identity, render(ring, expected), render(ring, actual), -1);
  }

  void truth(const std::string& identity, bool ok, OJ detail = nullptr) {
    if (failed() || ok) return;
    fail(identity, true, false, -1);
    if (!detail.is_null()) out_.inputs["detail"] = std::move(detail);
  }

  Outcome take() { return std::move(out_); }

 private:
  void fail(const std::string& identity, OJ expected, OJ actual, int order, const std::string& note = "") {
    out_.ok = false;
    out_.inputs["identity"] = identity;
    if (!note.empty()) out_.inputs["note"] = note;
    out_.expected = std::move(expected);
    out_.actual = std::move(actual);
    out_.order = order;
  }

  Outcome out_;
};

template <class F>
struct Coefficients {
  Poly<F> ring;
  Images<F> images;
  DifferentialRing<Poly<F>> diff;

  OJ describe() const {
    OJ out;
    out["ring"] = ring.name();
    out["derivations"] = describe_family(ring, images);
    return out;
  }
};

template <class F>
Coefficients<F> make_coefficients(const Poly<F>& ring, Images<F> images) {
  auto diff = make_differential_polynomial_ring(ring, images);
  return Coefficients<F>{ring, std::move(images), std::move(diff)};
}

template <class F>
Poly<F> poly_ring(const F& field, std::vector<std::string> gens = {"u", "v"}) {
  return Poly<F>(field, std::move(gens));
}

// ---- ring laws ---------------------------------------------------------------

template <class R>
void ring_laws(Verdict& v, const std::string& label, const R& r, const typename R::value_type& x,
               const typename R::value_type& y, const typename R::value_type& z) {
  const auto pre = label + ": ";
  v.element(pre + "x+y = y+x", r, r.add(x, y), r.add(y, x));
  v.element(pre + "(x+y)+z = x+(y+z)", r, r.add(r.add(x, y), z), r.add(x, r.add(y, z)));
  v.element(pre + "xy = yx", r, r.mul(x, y), r.mul(y, x));
  v.element(pre + "(xy)z = x(yz)", r, r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)));
  v.element(pre + "x(y+z) = xy+xz", r, r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
  v.element(pre + "x+0 = x", r, r.add(x, r.zero()), x);
  v.element(pre + "x*1 = x", r, r.mul(x, r.one()), x);
  v.element(pre + "x*0 = 0", r, r.mul(x, r.zero()), r.zero());
  v.element(pre + "x+(-x) = 0", r, r.add(x, r.neg(x)), r.zero());
  v.element(pre + "x-y = x+(-y)", r, r.sub(x, y), r.add(x, r.neg(y)));
}

template <class F>
Outcome check_ring_axioms(const F& field, Instance& in) {
  auto& rng = in.rng;
  const unsigned deg = in.bounds.degree;
  Verdict v(OJ{{"field", field.name()}});

  ring_laws(v, field.name(), field, random_scalar(field, rng), random_scalar(field, rng),
            random_scalar(field, rng));
  const auto x = random_nonzero_scalar(field, rng);
  const auto inv = field.try_invert(x);
  v.truth(field.name() + ": nonzero scalars invert", inv.has_value());
  if (inv) v.element(field.name() + ": x * x^-1 = 1", field, field.mul(x, *inv), field.one());

  const auto k = poly_ring(field);
  ring_laws(v, k.name(), k, random_poly(k, rng, deg + 1), random_poly(k, rng, deg + 1),
            random_poly(k, rng, deg + 1));
  const BigInt n(rng.range(-60, 60));
  v.element(k.name() + ": from_integer(n) = n*1", k, integer_by_doubling(k, n), k.from_integer(n));
  v.element(field.name() + ": from_integer(n) = n*1", field, integer_by_doubling(field, n),
            field.from_integer(n));

  const auto base = make_coefficients(k, random_family(k, rng, in.bounds.m, deg));
  DP<F> a(base.diff, {"x", "y"});
  ring_laws(v, a.name(), a, random_diffpoly(a, rng, deg + 1), random_diffpoly(a, rng, deg + 1),
            random_diffpoly(a, rng, deg + 1));
  return v.take();
}

// ---- derivations ---------------------------------------------------------------

template <class R>
void derivation_laws(Verdict& v, const std::string& label, const DifferentialRing<R>& d,
                     const typename R::value_type& x, const typename R::value_type& y) {
  const auto& r = d.ring();
  for (std::size_t i = 0; i < d.m(); ++i) {
    const auto pre = label + ": d" + std::to_string(i + 1);
    v.element(pre + "(x+y) = d(x)+d(y)", r, r.add(d.derive(x, i), d.derive(y, i)), d.derive(r.add(x, y), i));
    v.element(pre + "(xy) = d(x)y + x d(y)", r,
              r.add(r.mul(d.derive(x, i), y), r.mul(x, d.derive(y, i))), d.derive(r.mul(x, y), i));
    v.element(pre + "(1) = 0", r, r.zero(), d.derive(r.one(), i));
    for (std::size_t j = i + 1; j < d.m(); ++j) {
      v.element(pre + " commutes with d" + std::to_string(j + 1), r, d.derive(d.derive(x, j), i),
                d.derive(d.derive(x, i), j));
    }
  }
}

template <class F>
Outcome check_derivation_axioms(const F& field, Instance& in) {
  auto& rng = in.rng;
  const unsigned deg = in.bounds.degree;
  const std::size_t m = in.bounds.m;
  const unsigned n = std::max(in.bounds.trunc, 2U);
  const auto k = poly_ring(field);
  const auto coeffs = make_coefficients(k, random_family(k, rng, m, deg));
  OJ inputs{{"field", field.name()}, {"K", coeffs.describe()}};
  Verdict v(inputs);

  derivation_laws(v, k.name(), coeffs.diff, random_poly(k, rng, deg + 1), random_poly(k, rng, deg + 1));

  const DP<F> a(coeffs.diff, {"x", "y"});
  const auto da = differential(a);
  const auto f = random_diffpoly(a, rng, deg + 1);
  const auto g = random_diffpoly(a, rng, deg + 1);
  derivation_laws(v, a.name(), da, f, g);

  // Evaluation at a point of (H(K), delta + d) is a differential homomorphism.
  const HurwitzRing<Poly<F>> h(k, m, n);
  const auto l = twisted_structure(h, coeffs.diff.derivations());
  const std::vector<Series<PolyV<F>>> point{random_series(h, rng, [&] { return random_poly(k, rng, deg); }),
                                            random_series(h, rng, [&] { return random_poly(k, rng, deg); })};
  const std::function<Series<PolyV<F>>(const PolyV<F>&)> eta = [h](const PolyV<F>& c) { return h.embed(c); };
  auto eval = [&](const DPV<F>& p) { return dp_eval(a, p, l, eta, std::span(point)); };
  const unsigned order = n - std::max(a.order(f), a.order(g)) - 1;
  v.series("dp_eval(fg) = dp_eval(f) dp_eval(g)", h, h.mul(eval(f), eval(g)), eval(a.mul(f, g)), order + 1);
  v.series("dp_eval(f+g) = dp_eval(f) + dp_eval(g)", h, h.add(eval(f), eval(g)), eval(a.add(f, g)), order + 1);
  for (std::size_t i = 0; i < m; ++i) {
    v.series("dp_eval(d_i f) = D_i dp_eval(f)", h, l.derive(eval(f), i), eval(a.derive(f, i)), order);
  }

  // A symbol-value table defines a ring homomorphism K{x,y} -> K.
  const auto table = random_table(a, rng, 2, deg);
  auto hom = [&](const DPV<F>& p) { return dp_eval_hom(a, p, table); };
  v.element("phi(fg) = phi(f) phi(g)", k, k.mul(hom(f), hom(g)), hom(a.mul(f, g)));
  v.element("phi(f+g) = phi(f) + phi(g)", k, k.add(hom(f), hom(g)), hom(a.add(f, g)));
  v.element("phi(1) = 1", k, k.one(), hom(a.one()));
  return v.take();
}

// ---- Hurwitz series ------------------------------------------------------------

template <class F>
Outcome check_hurwitz_ring_axioms(const F& field, Instance& in) {
  auto& rng = in.rng;
  const unsigned deg = in.bounds.degree;
  const auto k = poly_ring(field, {"u"});
  const HurwitzRing<Poly<F>> h(k, in.bounds.m, in.bounds.trunc);
  auto gen = [&] { return random_poly(k, rng, deg); };
  const auto a = random_series(h, rng, gen);
  const auto b = random_series(h, rng, gen);
  const auto c = random_series(h, rng, gen);
  Verdict v(OJ{{"field", field.name()}, {"ring", h.name()}, {"a", render(h, a)}, {"b", render(h, b)},
               {"c", render(h, c)}});
  const unsigned n = h.trunc();
  v.series("ab = ba", h, h.mul(a, b), h.mul(b, a), n);
  v.series("(ab)c = a(bc)", h, h.mul(h.mul(a, b), c), h.mul(a, h.mul(b, c)), n);
  v.series("a(b+c) = ab+ac", h, h.add(h.mul(a, b), h.mul(a, c)), h.mul(a, h.add(b, c)), n);
  v.series("a*1 = a", h, a, h.mul(a, h.one()), n);
  v.series("a+0 = a", h, a, h.add(a, h.zero()), n);
  v.series("a-a = 0", h, h.zero(), h.sub(a, a), n);
  v.element("ev(ab) = ev(a)ev(b)", k, k.mul(h.ev(a), h.ev(b)), h.ev(h.mul(a, b)));
  v.element("ev(a+b) = ev(a)+ev(b)", k, k.add(h.ev(a), h.ev(b)), h.ev(h.add(a, b)));
  v.element("ev(1) = 1", k, k.one(), h.ev(h.one()));

  // Binary operations keep the smaller valid order.
  const unsigned lower = static_cast<unsigned>(rng.below(n + 1));
  const auto cut = h.with_valid(b, lower);
  v.truth("valid(a*b) = min(valid(a), valid(b))", h.mul(a, cut).valid == lower);
  v.truth("valid(a+b) = min(valid(a), valid(b))", h.add(a, cut).valid == lower);
  return v.take();
}

template <class F>
Outcome check_hurwitz_derivations(const F& field, Instance& in) {
  auto& rng = in.rng;
  const unsigned deg = in.bounds.degree;
  const std::size_t m = in.bounds.m;
  const unsigned n = std::max(in.bounds.trunc, 2U);
  const auto k = poly_ring(field);
  const auto coeffs = make_coefficients(k, random_family(k, rng, m, deg));
  const HurwitzRing<Poly<F>> h(k, m, n);
  auto gen = [&] { return random_poly(k, rng, deg); };
  const auto a = random_series(h, rng, gen);
  const auto b = random_series(h, rng, gen);
  Verdict v(OJ{{"field", field.name()}, {"K", coeffs.describe()}, {"a", render(h, a)}, {"b", render(h, b)}});

  const auto shift = shift_structure(h);
  const auto lifted = differential_structure(h, SeriesDifferentialStructure<PolyV<F>>{coeffs.diff.derivations(), false});
  const auto twisted = twisted_structure(h, coeffs.diff.derivations());
  for (std::size_t i = 0; i < m; ++i) {
    const std::string s = std::to_string(i + 1);
    v.series("d" + s + "(a+b) = d(a)+d(b)", h, h.add(shift.derive(a, i), shift.derive(b, i)),
             shift.derive(h.add(a, b), i), n - 1);
    v.series("d" + s + "(ab) = d(a)b + a d(b)", h,
             h.add(h.mul(shift.derive(a, i), b), h.mul(a, shift.derive(b, i))), shift.derive(h.mul(a, b), i), n - 1);
    v.series("delta" + s + "(a+b) = delta(a)+delta(b)", h, h.add(lifted.derive(a, i), lifted.derive(b, i)),
             lifted.derive(h.add(a, b), i), n);
    v.series("delta" + s + "(ab) = delta(a)b + a delta(b)", h,
             h.add(h.mul(lifted.derive(a, i), b), h.mul(a, lifted.derive(b, i))), lifted.derive(h.mul(a, b), i), n);
    v.series("(delta+d)" + s + " is Leibniz", h,
             h.add(h.mul(twisted.derive(a, i), b), h.mul(a, twisted.derive(b, i))), twisted.derive(h.mul(a, b), i),
             n - 1);
    v.series("d" + s + "(1) = 0", h, h.with_valid(h.zero(), n - 1), shift.derive(h.one(), i), n - 1);
    for (std::size_t j = 0; j < m; ++j) {
      const std::string t = std::to_string(j + 1);
      if (j > i) {
        v.series("d" + s + " d" + t + " = d" + t + " d" + s, h, shift.derive(shift.derive(a, j), i),
                 shift.derive(shift.derive(a, i), j), n - 2);
        v.series("delta" + s + " delta" + t + " = delta" + t + " delta" + s, h,
                 lifted.derive(lifted.derive(a, j), i), lifted.derive(lifted.derive(a, i), j), n);
      }
      v.series("delta" + s + " d" + t + " = d" + t + " delta" + s, h, lifted.derive(shift.derive(a, j), i),
               shift.derive(lifted.derive(a, i), j), n - 1);
    }
  }
  return v.take();
}

Outcome check_char_p_nilpotency(Instance& in) {
  const std::uint64_t p = in.field.p;
  const PrimeField field(p);
  const std::size_t m = in.bounds.m;
  const unsigned n = std::max<unsigned>(in.bounds.trunc, static_cast<unsigned>(p));
  const HurwitzRing<PrimeField> h(field, m, n);
  Verdict v(OJ{{"field", field.name()}, {"m", m}, {"trunc", n}});
  for (std::size_t i = 0; i < m; ++i) {
    const auto t = h.variable(i);
    auto power = h.one();
    for (std::uint64_t e = 1; e < p; ++e) power = h.mul(power, t);
    // t^(p-1) has coefficient (p-1)! at (p-1) e_i, which is nonzero mod p.
    v.truth("t_" + std::to_string(i + 1) + "^(p-1) != 0", !h.is_zero(power));
    v.series("t_" + std::to_string(i + 1) + "^p = 0", h, h.zero(), h.mul(power, t), n);
  }
  return v.take();
}

template <class F>
Outcome check_unit_inversion(const F& field, Instance& in) {
  auto& rng = in.rng;
  const HurwitzRing<F> h(field, in.bounds.m, in.bounds.trunc);
  auto a = random_series(h, rng, [&] { return random_scalar(field, rng); });
  a = h.with_coeff(a, MultiIndex(h.m()), random_nonzero_scalar(field, rng));
  a = h.with_valid(a, static_cast<unsigned>(rng.below(h.trunc() + 1)));
  Verdict v(OJ{{"field", field.name()}, {"a", render(h, a)}});
  const auto inv = h.invert(a);
  v.series("a * a^-1 = 1", h, h.with_valid(h.one(), a.valid), h.mul(a, inv), a.valid);
  v.series("a^-1 * a = 1", h, h.with_valid(h.one(), a.valid), h.mul(inv, a), a.valid);

  bool rejected = false;
  try {
    (void)h.invert(h.with_coeff(a, MultiIndex(h.m()), field.zero()));
  } catch (const MathDomainError&) {
    rejected = true;
  }
  v.truth("zero constant term is not a unit", rejected);
  return v.take();
}

template <class F>
Outcome check_divided_intertwiner(const F& field, Instance& in) {
  auto& rng = in.rng;
  const unsigned deg = in.bounds.degree;
  const std::size_t m = in.bounds.m;
  const unsigned n = in.bounds.trunc;
  const auto k = poly_ring(field, {"u"});
  const HurwitzRing<Poly<F>> h(k, m, n);
  const PowerSeriesRing<Poly<F>> ps(k, m, n);
  auto gen = [&] { return random_poly(k, rng, deg); };
  const auto a = random_series(h, rng, gen);
  const auto b = random_series(h, rng, gen);
  Verdict v(OJ{{"field", field.name()}, {"a", render(h, a)}, {"b", render(h, b)}});
  v.series("from_divided(to_divided(a)) = a", h, a, hw_from_divided(h, hw_to_divided(h, a)), n);
  v.series("to_divided(ab) = to_divided(a) to_divided(b)", ps, ps.mul(hw_to_divided(h, a), hw_to_divided(h, b)),
           hw_to_divided(h, h.mul(a, b)), n);
  for (std::size_t i = 0; i < m; ++i) {
    v.series("to_divided(d_i a) = d/dt_i to_divided(a)", ps, ps.shift_derive(hw_to_divided(h, a), i),
             hw_to_divided(h, h.shift_derive(a, i)), n - 1);
  }
  return v.take();
}

// ---- Taylor morphisms ------------------------------------------------------------

using Ctor = MorphismKind;

std::string ctor_name(Ctor c) { return std::string(morphism_name(c)); }

bool needs_constant_target(Ctor c) { return c == Ctor::kClassical || c == Ctor::kHurwitz; }

template <class A, class K>
Series<typename K::value_type> construct(Ctor c, const MorphismSpec<A, K>& spec, const typename A::value_type& a) {
  return expand(c, spec, a);
}

// Calls fn with the ring the constructor's output lives in.
template <class A, class K, class Fn>
auto with_output_ring(Ctor c, const MorphismSpec<A, K>& spec, Fn&& fn) {
  if (outputs_power_series(c)) return fn(spec.power_series_ring());
  return fn(spec.hurwitz_ring());
}

// Runs body over the instance field with the constructors defined there; over
// F_p the Taylor constructors, which need a Q-algebra, run over Q instead.
template <class Body>
Outcome over_all_constructors(Instance& in, Body&& body) {
  if (in.field.p == 0) {
    return body(Rational{}, std::vector<Ctor>{Ctor::kClassical, Ctor::kHurwitz, Ctor::kTwistedTaylor,
                                              Ctor::kTwistedHurwitz});
  }
  Outcome first = body(PrimeField(in.field.p), std::vector<Ctor>{Ctor::kHurwitz, Ctor::kTwistedHurwitz});
  if (!first.ok) return first;
  return body(Rational{}, std::vector<Ctor>{Ctor::kClassical, Ctor::kTwistedTaylor});
}

// A = (K, delta_A){x, y} with phi a random symbol-value table; the target
// (K, delta) carries a random commuting family unless constant.
template <class F>
struct TaylorSetup {
  Coefficients<F> target;
  Coefficients<F> source_base;
  DP<F> source;
  SymbolTable<PolyV<F>> table;
  MorphismSpec<DP<F>, Poly<F>> spec;

  OJ describe() const {
    OJ out;
    out["K"] = target.describe();
    out["A"] = OJ{{"coefficients", source_base.describe()}, {"vars", source.vars()}};
    out["phi"] = describe_table(source, table);
    out["trunc"] = spec.trunc();
    return out;
  }
};

template <class F>
TaylorSetup<F> make_taylor_setup(const F& field, Rng& rng, const Bounds& b, bool constant_target) {
  const auto k = poly_ring(field);
  auto target = make_coefficients(k, constant_target ? zero_images(k, b.m) : random_family(k, rng, b.m, b.degree));
  auto source_base = make_coefficients(k, rng.chance(1, 2) ? zero_images(k, b.m) : random_family(k, rng, b.m, b.degree));
  DP<F> source(source_base.diff, {"x", "y"});
  auto table = random_table(source, rng, b.trunc + 2, b.degree);
  auto phi = [source, table](const DPV<F>& f) { return dp_eval_hom(source, f, table); };
  MorphismSpec<DP<F>, Poly<F>> spec(differential(source), target.diff, phi, b.trunc);
  return TaylorSetup<F>{std::move(target), std::move(source_base), std::move(source), std::move(table),
                        std::move(spec)};
}

Outcome check_ev1(Instance& in) {
  return over_all_constructors(in, [&](const auto& field, const std::vector<Ctor>& ctors) {
    using F = std::decay_t<decltype(field)>;
    auto& rng = in.rng;
    const auto constant = make_taylor_setup(field, rng, in.bounds, true);
    const auto twisted = make_taylor_setup(field, rng, in.bounds, false);
    const auto a = random_diffpoly(constant.source, rng, in.bounds.degree + 1);
    Verdict v(OJ{{"field", field.name()}, {"constant_setup", constant.describe()},
                 {"twisted_setup", twisted.describe()}, {"a", render(constant.source, a)}});
    const auto& k = constant.spec.target().ring();
    for (Ctor c : ctors) {
      const auto& setup = needs_constant_target(c) ? constant : twisted;
      const auto series = construct(c, setup.spec, a);
      v.element("ev(" + ctor_name(c) + "(a)) = phi(a)", k, setup.spec.phi()(a), series.coeffs[0]);
    }
    if constexpr (std::is_same_v<F, PrimeField>) {
      for (Ctor c : {Ctor::kClassical, Ctor::kTwistedTaylor}) {
        bool rejected = false;
        try {
          (void)construct(c, needs_constant_target(c) ? constant.spec : twisted.spec, a);
        } catch (const MathDomainError&) {
          rejected = true;
        }
        v.truth(ctor_name(c) + " rejects a coefficient ring that is not a Q-algebra", rejected);
      }
    }
    return v.take();
  });
}

Outcome check_homomorphism(Instance& in) {
  return over_all_constructors(in, [&](const auto& field, const std::vector<Ctor>& ctors) {
    auto& rng = in.rng;
    const auto constant = make_taylor_setup(field, rng, in.bounds, true);
    const auto twisted = make_taylor_setup(field, rng, in.bounds, false);
    const auto& a_ring = constant.source;
    const auto a = random_diffpoly(a_ring, rng, in.bounds.degree);
    const auto b = random_diffpoly(a_ring, rng, in.bounds.degree);
    Verdict v(OJ{{"field", field.name()}, {"constant_setup", constant.describe()},
                 {"twisted_setup", twisted.describe()}, {"a", render(a_ring, a)}, {"b", render(a_ring, b)}});
    const unsigned n = in.bounds.trunc;
    for (Ctor c : ctors) {
      const auto& spec = (needs_constant_target(c) ? constant : twisted).spec;
      const std::string name = ctor_name(c);
      auto t = [&](const auto& x) { return construct(c, spec, x); };
      const auto ta = t(a);
      const auto tb = t(b);
      with_output_ring(c, spec, [&](const auto& out) {
        v.series(name + "(a+b) = T(a)+T(b)", out, out.add(ta, tb), t(a_ring.add(a, b)), n);
        v.series(name + "(ab) = T(a)T(b)", out, out.mul(ta, tb), t(a_ring.mul(a, b)), n);
        v.series(name + "(1) = 1", out, out.one(), t(a_ring.one()), n);
        const auto target = twisted_structure(out, spec.target().derivations());
        for (std::size_t i = 0; i < spec.m(); ++i) {
          v.series(name + "(d_i a) = D_i T(a)", out, target.derive(ta, i), t(spec.source().derive(a, i)), n - 1);
        }
        return 0;
      });
    }
    return v.take();
  });
}

Outcome check_tm1(Instance& in) {
  return over_all_constructors(in, [&](const auto& field, const std::vector<Ctor>& ctors) {
    using F = std::decay_t<decltype(field)>;
    auto& rng = in.rng;
    const auto& b = in.bounds;
    const auto k = poly_ring(field);
    const auto twisted = make_coefficients(k, random_family(k, rng, b.m, b.degree));
    const auto constant = make_coefficients(k, zero_images(k, b.m));
    const std::vector<PolyV<F>> point{random_poly(k, rng, b.degree), random_poly(k, rng, b.degree)};
    Verdict v(OJ{{"field", field.name()}, {"K", twisted.describe()},
                 {"point", OJ::array({k.format(point[0]), k.format(point[1])})}});
    const std::function<PolyV<F>(const PolyV<F>&)> eta = [](const PolyV<F>& c) { return c; };

    for (Ctor c : ctors) {
      const auto& target = needs_constant_target(c) ? constant : twisted;
      // phi = evaluation at a point of (K, delta) is differential on (K, delta){x, y}.
      const DP<F> source(target.diff, {"x", "y"});
      auto phi = [source, target, eta, point](const DPV<F>& f) {
        return dp_eval(source, f, target.diff, eta, std::span(point));
      };
      const MorphismSpec<DP<F>, Poly<F>> spec(differential(source), target.diff, phi, b.trunc);
      const auto a = random_diffpoly(source, rng, b.degree + 1);
      const std::vector<DPV<F>> samples{a, source.variable(0), source.variable(1), random_diffpoly(source, rng, 1)};
      spec.validate(samples);
      v.truth("phi is differential on the samples",
              is_differential_hom(RingHom<DP<F>, Poly<F>>{spec.source(), spec.target(), phi}, std::span(samples)));
      with_output_ring(c, spec, [&](const auto& out) {
        v.series(ctor_name(c) + "(a) = embed(phi(a)) [point]", out, out.embed(phi(a)),
                 construct(c, spec, a), b.trunc);
        return 0;
      });

      // The identity of (K, delta) is differential.
      auto id = [](const PolyV<F>& x) { return x; };
      const MorphismSpec<Poly<F>, Poly<F>> self(target.diff, target.diff, id, b.trunc);
      const auto x = random_poly(k, rng, b.degree + 1);
      with_output_ring(c, self, [&](const auto& out) {
        v.series(ctor_name(c) + "(x) = embed(x) [identity]", out, out.embed(x), construct(c, self, x),
                 b.trunc);
        return 0;
      });
    }
    return v.take();
  });
}

Outcome check_tm2(Instance& in) {
  return over_all_constructors(in, [&](const auto& field, const std::vector<Ctor>& ctors) {
    using F = std::decay_t<decltype(field)>;
    auto& rng = in.rng;
    const auto& b = in.bounds;
    const auto k = poly_ring(field);
    const auto base = make_coefficients(k, rng.chance(1, 2) ? zero_images(k, b.m) : random_family(k, rng, b.m, b.degree));
    const auto twisted = make_coefficients(k, random_family(k, rng, b.m, b.degree));
    const auto constant = make_coefficients(k, zero_images(k, b.m));
    const DP<F> small(base.diff, {"x"});
    const DP<F> big(base.diff, {"x", "y"});
    const auto psi_table = random_table(big, rng, b.trunc + 1, b.degree);
    SymbolTable<PolyV<F>> phi_table;
    for (const auto& [sym, value] : psi_table.values) {
      if (big.vars()[sym.var] == "x") phi_table.values.emplace(Symbol{small.var_index("x"), sym.order}, value);
    }
    auto chi = [small, big](const DPV<F>& f) { return include_variables(small, big, f); };
    auto psi = [big, psi_table](const DPV<F>& f) { return dp_eval_hom(big, f, psi_table); };
    auto phi = [small, phi_table](const DPV<F>& f) { return dp_eval_hom(small, f, phi_table); };
    const auto a = random_diffpoly(small, rng, b.degree + 1);
    Verdict v(OJ{{"field", field.name()}, {"K", twisted.describe()}, {"A_coefficients", base.describe()},
                 {"psi", describe_table(big, psi_table)}, {"a", render(small, a)}});

    const std::vector<DPV<F>> samples{a, small.variable(0), random_diffpoly(small, rng, 2)};
    v.truth("chi is differential on the samples",
            is_differential_hom(RingHom<DP<F>, DP<F>>{differential(small), differential(big), chi}, std::span(samples)));
    for (Ctor c : ctors) {
      const auto& target = needs_constant_target(c) ? constant : twisted;
      const MorphismSpec<DP<F>, Poly<F>> t_phi(differential(small), target.diff, phi, b.trunc);
      const MorphismSpec<DP<F>, Poly<F>> t_psi(differential(big), target.diff, psi, b.trunc);
      with_output_ring(c, t_phi, [&](const auto& out) {
        v.series(ctor_name(c) + ": T_phi(a) = T_psi(chi(a))", out, construct(c, t_psi, chi(a)),
                 construct(c, t_phi, a), b.trunc);
        return 0;
      });
    }
    return v.take();
  });
}

// EV2: with A = (series ring, structure) and phi = ev, a constructor returns
// its input.
template <class S, class K>
void ev2_identity(Verdict& v, const std::string& label, Ctor c, const S& ring, const DifferentialRing<S>& source,
                  const DifferentialRing<K>& target, const typename S::value_type& a) {
  auto ev = [ring](const typename S::value_type& s) { return ring.ev(s); };
  const MorphismSpec<S, K> spec(source, target, ev, ring.trunc());
  v.series(label, ring, a, construct(c, spec, a), a.valid);
}

template <class F>
Outcome check_ev2(const F& field, Instance& in) {
  auto& rng = in.rng;
  const auto& b = in.bounds;
  const unsigned deg = b.degree;

  // K = F[u] with delta_1(u) = 1 over Q, u over F_p, and delta_i a multiple.
  const auto k1 = poly_ring(field, {"u"});
  auto fixed_images = zero_images(k1, b.m);
  const auto u = k1.generator(0);
  const auto lead = field.is_rational_algebra() ? k1.one() : u;
  for (std::size_t i = 0; i < b.m; ++i) fixed_images[i][0] = i == 0 ? lead : k1.scale(random_scalar(field, rng), lead);
  const auto fixed = make_coefficients(k1, fixed_images);
  const HurwitzRing<Poly<F>> h1(k1, b.m, b.trunc);
  auto a1 = random_series(h1, rng, [&] { return random_poly(k1, rng, deg); });
  a1 = h1.with_valid(a1, static_cast<unsigned>(rng.range(std::max<long>(0, b.trunc - 1), b.trunc)));

  const auto k2 = poly_ring(field);
  const auto random = make_coefficients(k2, random_family(k2, rng, b.m, deg));
  const HurwitzRing<Poly<F>> h2(k2, b.m, b.trunc);
  const auto a2 = random_series(h2, rng, [&] { return random_poly(k2, rng, deg); });

  Verdict v(OJ{{"field", field.name()}, {"K_fixed", fixed.describe()}, {"a_fixed", render(h1, a1)},
               {"K_random", random.describe()}, {"a_random", render(h2, a2)}});
  ev2_identity(v, "twisted_hurwitz_ev = id on (H(K), delta+d) [fixed K]", Ctor::kTwistedHurwitz, h1,
               twisted_structure(h1, fixed.diff.derivations()), fixed.diff, a1);
  ev2_identity(v, "twisted_hurwitz_ev = id on (H(K), delta+d) [random K]", Ctor::kTwistedHurwitz, h2,
               twisted_structure(h2, random.diff.derivations()), random.diff, a2);
  const auto constant = DifferentialRing<Poly<F>>::constant(k2, b.m);
  ev2_identity(v, "hurwitz_ev = id on (H(K), d)", Ctor::kHurwitz, h2, shift_structure(h2), constant, a2);

  if constexpr (std::is_same_v<F, Rational>) {
    const PowerSeriesRing<Poly<F>> ps(k2, b.m, b.trunc);
    const auto p = random_series(ps, rng, [&] { return random_poly(k2, rng, deg); });
    ev2_identity(v, "twisted_taylor_ev = id on (K[[t]], delta+d/dt)", Ctor::kTwistedTaylor, ps,
                 twisted_structure(ps, random.diff.derivations()), random.diff, p);
    ev2_identity(v, "classical_ev = id on (K[[t]], d/dt)", Ctor::kClassical, ps, shift_structure(ps), constant, p);
  }
  return v.take();
}

template <class F>
Outcome check_lemma83(const F& field, Instance& in) {
  auto& rng = in.rng;
  const auto& b = in.bounds;
  const unsigned deg = b.degree;
  const auto k = poly_ring(field, {"u", "v", "w"});
  const auto u = k.generator(0);
  const auto one = k.one();

  // delta_i = a_i u d/du + b_i d/dw and partial_i = c_i g(v) d/dv + e_i d/dw
  // commute with each other and among themselves.
  auto delta = zero_images(k, b.m);
  auto partial = zero_images(k, b.m);
  if (rng.chance(2, 3)) {
    auto g = random_univariate(k, rng, 1, deg);
    if (k.is_zero(g)) g = one;
    for (std::size_t i = 0; i < b.m; ++i) {
      delta[i][0] = k.scale(random_scalar(field, rng), u);
      delta[i][2] = k.scale(random_scalar(field, rng), one);
      partial[i][1] = k.scale(random_scalar(field, rng), g);
      partial[i][2] = k.scale(random_scalar(field, rng), one);
    }
  } else {
    // Both families are multiples of one random derivation D.
    std::vector<PolyV<F>> d;
    for (std::size_t j = 0; j < 3; ++j) d.push_back(random_poly(k, rng, deg));
    for (std::size_t i = 0; i < b.m; ++i) {
      const auto c1 = random_scalar(field, rng);
      const auto c2 = random_scalar(field, rng);
      for (std::size_t j = 0; j < 3; ++j) {
        delta[i][j] = k.scale(c1, d[j]);
        partial[i][j] = k.scale(c2, d[j]);
      }
    }
  }
  const auto dfam = make_coefficients(k, delta);
  const auto pfam = make_coefficients(k, partial);
  const auto sum = add_families(k, dfam.diff.derivations(), pfam.diff.derivations());
  const HurwitzRing<Poly<F>> h(k, b.m, b.trunc);
  auto a = random_series(h, rng, [&] { return random_poly(k, rng, deg); });
  a = h.with_valid(a, static_cast<unsigned>(rng.range(std::max<long>(0, b.trunc - 1), b.trunc)));

  Verdict v(OJ{{"field", field.name()}, {"delta", dfam.describe()}, {"partial", pfam.describe()}, {"a", render(h, a)}});
  const auto& dd = dfam.diff.derivations();
  const auto& pd = pfam.diff.derivations();
  v.series("ev_twist(ev_twist(a, partial), delta) = ev_twist(a, delta+partial)", h, ev_twist(h, a, sum),
           ev_twist(h, ev_twist(h, a, pd), dd), a.valid);
  v.series("ev_twist(ev_twist(a, delta), partial) = ev_twist(a, delta+partial)", h, ev_twist(h, a, sum),
           ev_twist(h, ev_twist(h, a, dd), pd), a.valid);

  // The closed form agrees with the Hurwitz morphism of ev out of (H(K), partial + d).
  const auto source = twisted_structure(h, pd);
  auto ev = [h](const Series<PolyV<F>>& s) { return h.ev(s); };
  const MorphismSpec<HurwitzRing<Poly<F>>, Poly<F>> spec(source, DifferentialRing<Poly<F>>::constant(k, b.m), ev,
                                                         b.trunc);
  v.series("ev_twist(a, partial) = H_ev(a) on (H(K), partial+d)", h, hurwitz_morphism(spec, a), ev_twist(h, a, pd),
           a.valid);
  return v.take();
}

template <class F>
Outcome check_cor84(const F& field, Instance& in) {
  auto& rng = in.rng;
  const auto& b = in.bounds;
  const auto k = poly_ring(field);
  const auto fam = make_coefficients(k, random_family(k, rng, b.m, b.degree));
  const HurwitzRing<Poly<F>> h(k, b.m, b.trunc);
  auto a = random_series(h, rng, [&] { return random_poly(k, rng, b.degree); });
  a = h.with_valid(a, static_cast<unsigned>(rng.range(std::max<long>(0, b.trunc - 1), b.trunc)));
  const auto& d = fam.diff.derivations();
  Verdict v(OJ{{"field", field.name()}, {"delta", fam.describe()}, {"a", render(h, a)}});
  v.series("ev_untwist(ev_twist(a)) = a", h, a, ev_untwist(h, ev_twist(h, a, d), d), a.valid);
  v.series("ev_twist(ev_untwist(a)) = a", h, a, ev_twist(h, ev_untwist(h, a, d), d), a.valid);

  // ev_twist is a ring homomorphism (H(K), delta+d) -> (H(K), d) intertwining the derivations.
  const auto c = random_series(h, rng, [&] { return random_poly(k, rng, b.degree); });
  v.series("ev_twist(ac) = ev_twist(a) ev_twist(c)", h, h.mul(ev_twist(h, a, d), ev_twist(h, c, d)),
           ev_twist(h, h.mul(a, c), d), a.valid);
  if (a.valid > 0) {
    const auto twisted = twisted_structure(h, d);
    for (std::size_t i = 0; i < b.m; ++i) {
      v.series("ev_twist((delta+d)_i a) = d_i ev_twist(a)", h, h.shift_derive(ev_twist(h, a, d), i),
               ev_twist(h, twisted.derive(a, i), d), a.valid - 1);
    }
  }
  return v.take();
}

Outcome check_twist_classical_bridge(Instance& in) {
  auto& rng = in.rng;
  const Rational field;
  const auto twisted = make_taylor_setup(field, rng, in.bounds, false);
  const auto constant = make_taylor_setup(field, rng, in.bounds, true);
  const auto a = random_diffpoly(twisted.source, rng, in.bounds.degree + 1);
  const auto c = random_diffpoly(constant.source, rng, in.bounds.degree + 1);
  Verdict v(OJ{{"twisted_setup", twisted.describe()}, {"constant_setup", constant.describe()},
               {"a", render(twisted.source, a)}, {"c", render(constant.source, c)}});
  const unsigned n = in.bounds.trunc;
  const auto& h = twisted.spec.hurwitz_ring();
  const auto& ps = twisted.spec.power_series_ring();
  v.series("to_divided(twisted_hurwitz(a)) = twisted_taylor(a)", ps, twisted_taylor(twisted.spec, a),
           hw_to_divided(h, twisted_hurwitz(twisted.spec, a)), n);
  v.series("to_divided(hurwitz(c)) = classical(c)", ps, classical_taylor(constant.spec, c),
           hw_to_divided(h, hurwitz_morphism(constant.spec, c)), n);
  v.series("twisted_hurwitz = hurwitz when delta = 0", h, hurwitz_morphism(constant.spec, c),
           twisted_hurwitz(constant.spec, c), n);
  v.series("twisted_taylor = classical when delta = 0", ps, classical_taylor(constant.spec, c),
           twisted_taylor(constant.spec, c), n);
  return v.take();
}

// ---- registry --------------------------------------------------------------------

using Runner = std::function<Outcome(Instance&)>;

template <class Fn>
Runner any_field(Fn fn) {
  return [fn](Instance& in) { return with_field(in.field, [&](const auto& f) { return fn(f, in); }); };
}

#define DIFFTAYLOR_ANY_FIELD(FN) any_field([](const auto& f, Instance& in) { return FN(f, in); })

struct Registered {
  CheckInfo info;
  // Fields the check can run over; empty means any. When the configured
  // fields miss all of them, the check falls back to this list.
  std::vector<std::string> fields;
  bool primes_only = false;
  Runner run;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> checks{
      {{"ring_axioms", "commutative ring laws for scalars, polynomial and differential polynomial rings"},
       {}, false, DIFFTAYLOR_ANY_FIELD(check_ring_axioms)},
      {{"derivation_axioms", "derivations are additive, Leibniz and commute; evaluation maps are homomorphisms"},
       {}, false, DIFFTAYLOR_ANY_FIELD(check_derivation_axioms)},
      {{"hurwitz_ring_axioms", "H(K) is a commutative ring and ev is a ring homomorphism"},
       {}, false, DIFFTAYLOR_ANY_FIELD(check_hurwitz_ring_axioms)},
      {{"hurwitz_derivations", "shift and coefficientwise derivations on H(K) are Leibniz and commute"},
       {}, false, DIFFTAYLOR_ANY_FIELD(check_hurwitz_derivations)},
      {{"char_p_nilpotency", "t_i^p = 0 in H(F_p)"}, {"F2", "F3", "F5"}, true, check_char_p_nilpotency},
      {{"unit_inversion", "series with a nonzero constant term over a field are units"},
       {}, false, DIFFTAYLOR_ANY_FIELD(check_unit_inversion)},
      {{"tm1", "T(a) = embed(phi(a)) when phi is differential"}, {}, false, check_tm1},
      {{"tm2", "T_phi = T_psi o chi for an inclusion chi and phi = psi o chi"}, {}, false, check_tm2},
      {{"ev1", "ev(T(a)) = phi(a) for all four constructors"}, {}, false, check_ev1},
      {{"ev2", "T_ev is the identity on the series ring itself"}, {}, false, DIFFTAYLOR_ANY_FIELD(check_ev2)},
      {{"lemma83", "twisting by commuting families composes additively"}, {}, false, DIFFTAYLOR_ANY_FIELD(check_lemma83)},
      {{"cor84", "ev_untwist inverts ev_twist, which is a differential isomorphism"}, {}, false, DIFFTAYLOR_ANY_FIELD(check_cor84)},
      {{"twist_classical_bridge", "to_divided o twisted_hurwitz = twisted_taylor over Q"}, {"Q"}, false,
       check_twist_classical_bridge},
      {{"divided_intertwiner", "to_divided is a ring isomorphism intertwining d with d/dt"}, {"Q"}, false,
       DIFFTAYLOR_ANY_FIELD(check_divided_intertwiner)},
      {{"homomorphism", "each constructor is additive, multiplicative, unital and differential"}, {}, false,
       check_homomorphism},
  };
  return checks;
}

#undef DIFFTAYLOR_ANY_FIELD

const Registered& find_check(const std::string& name) {
  for (const auto& r : registry()) {
    if (r.info.name == name) return r;
  }
  throw std::invalid_argument("unknown check \"" + name + "\"");
}

Outcome run_one(const Registered& reg, std::uint64_t seed, const FieldSpec& field, const Bounds& bounds) {
  Instance in{Rng(seed), field, bounds};
  try {
    return reg.run(in);
  } catch (const std::exception& e) {
    Outcome out;
    out.ok = false;
    out.inputs = OJ{{"field", field.name}};
    out.expected = "no exception";
    out.actual = OJ{{"exception", e.what()}};
    return out;
  }
}

// For degree, then trunc, then m, keeps the smallest value under which the
// instance still fails, repeating until no bound can be lowered. Each bound
// is searched from its minimum up, since the instance drawn for a seed
// changes with the bounds and failures need not be monotone in them.
Bounds shrink(const Registered& reg, std::uint64_t seed, const FieldSpec& field, Bounds b, Outcome& out) {
  auto slot = [](Bounds& c, int dim) -> std::size_t {
    return dim == 0 ? c.degree : dim == 1 ? c.trunc : c.m;
  };
  auto assign = [](Bounds& c, int dim, std::size_t v) {
    if (dim == 0) c.degree = static_cast<unsigned>(v);
    if (dim == 1) c.trunc = static_cast<unsigned>(v);
    if (dim == 2) c.m = v;
  };
  for (bool progress = true; progress;) {
    progress = false;
    for (int dim = 0; dim < 3; ++dim) {
      const std::size_t lowest = dim == 0 ? 0 : 1;
      for (std::size_t v = lowest; v < slot(b, dim); ++v) {
        Bounds c = b;
        assign(c, dim, v);
        Outcome o = run_one(reg, seed, field, c);
        if (!o.ok) {
          b = c;
          out = std::move(o);
          progress = true;
          break;
        }
      }
    }
  }
  return b;
}

std::vector<FieldSpec> fields_for(const Registered& reg, const std::vector<FieldSpec>& configured) {
  std::vector<FieldSpec> out;
  for (const auto& f : configured) {
    const bool allowed = reg.fields.empty() ||
                         std::find(reg.fields.begin(), reg.fields.end(), f.name) != reg.fields.end() ||
                         (reg.primes_only && f.p != 0);
    if (allowed) out.push_back(f);
  }
  if (out.empty()) {
    for (const auto& name : reg.fields) out.push_back(parse_field(name));
  }
  return out;
}

CheckReport run_check(const Registered& reg, const CheckConfig& config, const std::vector<FieldSpec>& configured) {
  const auto fields = fields_for(reg, configured);
  Rng stream(splitmix64(config.seed ^ fnv1a(reg.info.name)));
  CheckReport report;
  report.check_name = reg.info.name;
  for (std::size_t n = 0; n < config.instances; ++n) {
    const std::uint64_t seed = stream.next();
    const FieldSpec& field = fields[stream.below(fields.size())];
    Bounds b;
    b.m = 1 + stream.below(config.bounds.m);
    b.trunc = 1 + static_cast<unsigned>(stream.below(config.bounds.trunc));
    b.degree = static_cast<unsigned>(stream.below(config.bounds.degree + 1));
    Outcome out = run_one(reg, seed, field, b);
    ++report.instances;
    if (out.ok || report.failures.size() >= config.max_failures) continue;
    b = shrink(reg, seed, field, b, out);
    report.failures.push_back(
        CheckFailure{seed, field.name, b, std::move(out.inputs), std::move(out.expected), std::move(out.actual), out.order});
  }
  return report;
}

}  // namespace

nlohmann::ordered_json CheckReport::to_json() const {
  OJ out;
  out["check"] = check_name;
  out["status"] = passed() ? "pass" : "fail";
  out["instances"] = instances;
  OJ list = OJ::array();
  for (const auto& f : failures) {
    OJ item;
    item["seed"] = f.seed;
    item["field"] = f.field;
    item["bounds"] = OJ{{"m", f.bounds.m}, {"trunc", f.bounds.trunc}, {"degree", f.bounds.degree}};
    item["order"] = f.order;
    item["inputs"] = f.inputs;
    item["expected"] = f.expected;
    item["actual"] = f.actual;
    list.push_back(std::move(item));
  }
  out["failures"] = std::move(list);
  return out;
}

const std::vector<CheckInfo>& registered_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& r : registry()) out.push_back(r.info);
    return out;
  }();
  return infos;
}

CheckConfig parse_check_config(const nlohmann::json& doc) {
  using namespace json_detail;
  if (!doc.is_object()) throw ValidationError("", "expected an object");
  CheckConfig config;
  for (const auto& [key, value] : doc.items()) {
    const std::string path = "/" + key;
    if (key == "seed") {
      config.seed = require_uint(value, path, UINT64_MAX);
    } else if (key == "checks") {
      require_array(value, path);
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string& name = require_string(value[i], child(path, i));
        try {
          (void)find_check(name);
        } catch (const std::invalid_argument& e) {
          throw ValidationError(child(path, i), e.what());
        }
        config.checks.push_back(name);
      }
    } else if (key == "instances") {
      config.instances = require_uint(value, path, 1000000);
    } else if (key == "max_m") {
      config.bounds.m = require_uint(value, path, 3);
      if (config.bounds.m == 0) throw ValidationError(path, "must be at least 1");
    } else if (key == "max_trunc") {
      config.bounds.trunc = static_cast<unsigned>(require_uint(value, path, 12));
      if (config.bounds.trunc == 0) throw ValidationError(path, "must be at least 1");
    } else if (key == "max_degree") {
      config.bounds.degree = static_cast<unsigned>(require_uint(value, path, 4));
    } else if (key == "fields") {
      require_array(value, path);
      config.fields.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string& name = require_string(value[i], child(path, i));
        try {
          (void)parse_field(name);
        } catch (const std::invalid_argument& e) {
          throw ValidationError(child(path, i), e.what());
        }
        config.fields.push_back(name);
      }
      if (config.fields.empty()) throw ValidationError(path, "needs at least one field");
    } else if (key == "inject_fault") {
      config.inject_fault = require_string(value, path);
      if (!config.inject_fault.empty() && config.inject_fault != "binomial") {
        throw ValidationError(path, "unknown fault \"" + config.inject_fault + "\"");
      }
    } else if (key == "threads") {
      config.threads = static_cast<unsigned>(require_uint(value, path, 256));
    } else if (key == "max_failures") {
      config.max_failures = require_uint(value, path, 1000);
    } else {
      throw ValidationError(path, "unknown field");
    }
  }
  return config;
}

std::vector<CheckReport> run_suite(const CheckConfig& config) {
  std::vector<const Registered*> selected;
  if (config.checks.empty()) {
    for (const auto& r : registry()) selected.push_back(&r);
  } else {
    for (const auto& name : config.checks) selected.push_back(&find_check(name));
  }
  std::vector<FieldSpec> fields;
  for (const auto& name : config.fields) fields.push_back(parse_field(name));
  if (fields.empty()) throw std::invalid_argument("no fields configured");

  std::optional<fault::ScopedFault> fault_guard;
  if (config.inject_fault == "binomial") fault_guard.emplace(fault::Kind::kBinomialTable);
  else if (!config.inject_fault.empty()) throw std::invalid_argument("unknown fault \"" + config.inject_fault + "\"");

  std::vector<CheckReport> reports(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) reports[i] = run_check(*selected[i], config, fields);
  };
  unsigned threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(selected.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return reports;
}

CheckFailure replay(const std::string& check, std::uint64_t seed, const std::string& field, const Bounds& bounds,
                    bool* failed) {
  const auto& reg = find_check(check);
  Outcome out = run_one(reg, seed, parse_field(field), bounds);
  if (failed != nullptr) *failed = !out.ok;
  return CheckFailure{seed, field, bounds, std::move(out.inputs), std::move(out.expected), std::move(out.actual),
                      out.order};
}

std::string reports_to_jsonl(const std::vector<CheckReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

}  // namespace difftaylor
