#include "difftaylor/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "difftaylor/checker.hpp"
#include "difftaylor/diffpoly.hpp"
#include "difftaylor/errors.hpp"
#include "difftaylor/hurwitz.hpp"
#include "difftaylor/polynomial.hpp"
#include "difftaylor/serialize.hpp"
#include "difftaylor/taylor.hpp"

namespace difftaylor {
namespace {

using namespace json_detail;

template <class F>
using Poly = Polynomial<F>;
template <class F>
using PolyV = typename Polynomial<F>::value_type;

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void reject_unknown_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ValidationError(child(path, key), "unknown field");
  }
}

// A list of m objects mapping generator names to the images of a derivation.
template <class F>
DifferentialRing<Poly<F>> read_derivations(const Poly<F>& ring, const Json* list, std::size_t m,
                                           const std::string& path) {
  std::vector<std::vector<PolyV<F>>> images(m, std::vector<PolyV<F>>(ring.num_generators(), ring.zero()));
  if (list != nullptr) {
    require_array(*list, path);
    if (list->size() != m) {
      throw ValidationError(path, "expected " + std::to_string(m) + " derivations, got " + std::to_string(list->size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
      const std::string dpath = child(path, i);
      const Json& d = (*list)[i];
      if (!d.is_object()) throw ValidationError(dpath, "expected an object mapping generators to images");
      for (const auto& [gen, image] : d.items()) {
        std::size_t j = 0;
        while (j < ring.num_generators() && ring.generators()[j] != gen) ++j;
        if (j == ring.num_generators()) throw ValidationError(child(dpath, gen), "unknown generator \"" + gen + "\"");
        images[i][j] = parse_element(ring, image, child(dpath, gen));
      }
    }
  }
  try {
    return make_differential_polynomial_ring(ring, images);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path, e.what());
  }
}

// Self source: an element of K as a string or as [{coeff, monomial: [[generator, power], ...]}].
template <class F>
PolyV<F> read_self_element(const Poly<F>& ring, const Json& doc, const std::string& path) {
  if (doc.is_string()) return parse_element(ring, doc, path);
  require_array(doc, path);
  auto out = ring.zero();
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const std::string tpath = child(path, n);
    auto term = ring.constant(parse_element(ring.base(), require(doc[n], "coeff", tpath), child(tpath, "coeff")));
    const std::string mpath = child(tpath, "monomial");
    const Json& factors = require_array(require(doc[n], "monomial", tpath), mpath);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const std::string fpath = child(mpath, j);
      const Json& f = require_array(factors[j], fpath);
      if (f.size() != 2) throw ValidationError(fpath, "expected [generator, power]");
      const std::string& gen = require_string(f[0], child(fpath, 0));
      std::size_t g = 0;
      while (g < ring.num_generators() && ring.generators()[g] != gen) ++g;
      if (g == ring.num_generators()) throw ValidationError(child(fpath, 0), "unknown generator \"" + gen + "\"");
      const auto power = require_uint(f[1], child(fpath, 1), 1U << 16);
      for (std::uint64_t p = 0; p < power; ++p) term = ring.mul(term, ring.generator(g));
    }
    out = ring.add(out, term);
  }
  return out;
}

template <class K>
std::string write_series(MorphismKind kind, const HurwitzRing<K>& h, const PowerSeriesRing<K>& ps,
                         const Series<typename K::value_type>& s) {
  return outputs_power_series(kind) ? series_to_json(ps, s).dump() : series_to_json(h, s).dump();
}

template <class F>
std::string expand_over(const F& field, const Json& doc, std::vector<std::string> generators, const Json* derivations,
                        std::size_t m, unsigned trunc, MorphismKind kind) {
  Poly<F> k(field, std::move(generators));
  const auto target = read_derivations(k, derivations, m, "/ring/derivations");
  const Json& source = require(doc, "source", "");
  const std::string& source_kind = require_string(require(source, "kind", "/source"), "/source/kind");
  reject_unknown_keys(source, "/source", {"kind", "vars", "source_derivations"});
  const auto base = read_derivations(k, optional_field(source, "source_derivations"), m, "/source/source_derivations");
  const Json& phi = require(doc, "phi", "");

  if (source_kind == "self") {
    if (source.contains("vars")) throw ValidationError("/source/vars", "a self source has no variables");
    if (!phi.is_string() || phi.get<std::string>() != "identity") {
      throw ValidationError("/phi", "a self source takes phi = \"identity\"");
    }
    const auto a = read_self_element(k, require(doc, "element", ""), "/element");
    auto id = [](const PolyV<F>& x) { return x; };
    const MorphismSpec<Poly<F>, Poly<F>> spec(base, target, id, trunc);
    const std::vector<PolyV<F>> samples{a};
    spec.validate(samples);
    return write_series(kind, spec.hurwitz_ring(), spec.power_series_ring(), expand(kind, spec, a));
  }
  if (source_kind != "diffpoly") throw ValidationError("/source/kind", "expected \"self\" or \"diffpoly\"");

  const Json& vars_doc = require_array(require(source, "vars", "/source"), "/source/vars");
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < vars_doc.size(); ++i) vars.push_back(require_string(vars_doc[i], child("/source/vars", i)));
  std::optional<DiffPolyRing<Poly<F>>> maybe_ring;
  try {
    maybe_ring.emplace(base, vars);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("/source/vars", e.what());
  }
  const auto& a_ring = *maybe_ring;

  SymbolTable<PolyV<F>> table;
  if (const Json* dz = optional_field(doc, "default_zero")) {
    if (!dz->is_boolean()) throw ValidationError("/default_zero", "expected a boolean");
    table.default_zero = dz->get<bool>();
  }
  require_array(phi, "/phi");
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const std::string epath = child("/phi", n);
    const Json& entry = require_array(phi[n], epath);
    if (entry.size() != 3) throw ValidationError(epath, "expected [variable, multi-index, element]");
    std::size_t var = 0;
    try {
      var = a_ring.var_index(require_string(entry[0], child(epath, 0)));
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ValidationError*>(&e) != nullptr) throw;
      throw ValidationError(child(epath, 0), e.what());
    }
    const MultiIndex alpha = parse_multi_index(entry[1], m, child(epath, 1));
    if (!table.values.emplace(Symbol{var, alpha}, parse_element(k, entry[2], child(epath, 2))).second) {
      throw ValidationError(epath, "symbol " + a_ring.format_symbol(Symbol{var, alpha}) + " given twice");
    }
  }
  const auto a = diffpoly_from_json(a_ring, require(doc, "element", ""), "/element");
  auto map = [a_ring, table](const typename DiffPolyRing<Poly<F>>::value_type& f) {
    return dp_eval_hom(a_ring, f, table);
  };
  const MorphismSpec<DiffPolyRing<Poly<F>>, Poly<F>> spec(differential(a_ring), target, map, trunc);
  std::vector<typename DiffPolyRing<Poly<F>>::value_type> samples{a};
  for (std::size_t v = 0; v < a_ring.num_vars(); ++v) samples.push_back(a_ring.variable(v));
  spec.validate(samples);
  return write_series(kind, spec.hurwitz_ring(), spec.power_series_ring(), expand(kind, spec, a));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_document(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("", origin + " is not valid JSON: " + e.what());
  }
}

// Writes to the file at path, or to out when path is empty or "-".
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("", "cannot write " + path);
  file << text;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string expand_problem(const Json& doc, std::optional<unsigned> trunc_override) {
  if (!doc.is_object()) throw ValidationError("", "expected an object");
  reject_unknown_keys(doc, "", {"ring", "m", "trunc", "source", "phi", "default_zero", "morphism", "element"});
  const Json& ring = require(doc, "ring", "");
  reject_unknown_keys(ring, "/ring", {"kind", "p", "generators", "derivations"});
  const std::string& kind = require_string(require(ring, "kind", "/ring"), "/ring/kind");
  const auto m = static_cast<std::size_t>(require_uint(require(doc, "m", ""), "/m", 3));
  if (m == 0) throw ValidationError("/m", "must be at least 1");
  unsigned trunc = static_cast<unsigned>(require_uint(require(doc, "trunc", ""), "/trunc", 12));
  if (trunc_override) {
    if (*trunc_override > 12) throw ValidationError("/trunc", "truncation override exceeds 12");
    trunc = *trunc_override;
  }
  const std::string& name = require_string(require(doc, "morphism", ""), "/morphism");
  const auto morphism = morphism_from_name(name);
  if (!morphism) {
    throw ValidationError("/morphism", "unknown morphism \"" + name +
                                           "\"; expected classical, hurwitz, twisted_taylor or twisted_hurwitz");
  }

  std::uint64_t p = 0;
  if (kind == "Fp" || (kind == "poly" && ring.contains("p"))) {
    p = require_uint(require(ring, "p", "/ring"), "/ring/p", (1ULL << 62) - 1);
    if (!is_prime(p)) throw ValidationError("/ring/p", std::to_string(p) + " is not prime");
  } else if (kind != "Q" && kind != "poly") {
    throw ValidationError("/ring/kind", "expected \"Q\", \"Fp\" or \"poly\"");
  } else if (ring.contains("p")) {
    throw ValidationError("/ring/p", "only Fp and poly rings take a modulus");
  }
  std::vector<std::string> generators;
  if (const Json* gens = optional_field(ring, "generators")) {
    if (kind != "poly") throw ValidationError("/ring/generators", "only poly rings have generators");
    require_array(*gens, "/ring/generators");
    for (std::size_t i = 0; i < gens->size(); ++i) {
      generators.push_back(require_string((*gens)[i], child("/ring/generators", i)));
    }
  }
  const Json* derivations = optional_field(ring, "derivations");
  try {
    if (p == 0) return expand_over(Rational{}, doc, generators, derivations, m, trunc, *morphism);
    return expand_over(PrimeField(p), doc, generators, derivations, m, trunc, *morphism);
  } catch (const ValidationError&) {
    throw;
  } catch (const MissingSymbolError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError("", e.what());
  }
}

std::vector<GoldenResult> run_selftest() {
  std::vector<GoldenResult> out;
  auto record = [&](std::string name, std::string expected, auto&& compute) {
    std::string actual;
    try {
      actual = compute();
    } catch (const std::exception& e) {
      actual = std::string("exception: ") + e.what();
    }
    out.push_back({std::move(name), std::move(expected), std::move(actual)});
  };

  // (Q[u], delta(u) = 1), A = the same carrier with zero derivation, phi = id, a = u.
  const Json twisted = {{"ring", {{"kind", "poly"}, {"generators", {"u"}}, {"derivations", {{{"u", "1"}}}}}},
                        {"m", 1},
                        {"trunc", 8},
                        {"source", {{"kind", "self"}}},
                        {"phi", "identity"},
                        {"element", "u"}};
  const std::string u_minus_t = R"({"m":1,"trunc":8,"valid":8,"ring":"Q[u]","coeffs":[[[0],"u"],[[1],"-1"]]})";
  for (const char* kind : {"twisted_hurwitz", "twisted_taylor"}) {
    Json doc = twisted;
    doc["morphism"] = kind;
    record(std::string(kind) + " of u is u - t", u_minus_t, [&] { return expand_problem(doc); });
  }

  // Q{x} with phi(x^(n)) = 1 for every n <= 10.
  Json exp_doc = {{"ring", {{"kind", "Q"}}},
                  {"m", 1},
                  {"trunc", 10},
                  {"source", {{"kind", "diffpoly"}, {"vars", {"x"}}}},
                  {"element", {{{"coeff", "1"}, {"monomial", {{"x", {0}, 1}}}}}}};
  Json ones = Json::array();
  for (int n = 0; n <= 10; ++n) ones.push_back({"x", {n}, "1"});
  exp_doc["phi"] = ones;
  exp_doc["morphism"] = "classical";
  record("classical Taylor of x is the exponential series",
         R"({"m":1,"trunc":10,"valid":10,"ring":"Q","coeffs":[[[0],"1"],[[1],"1"],[[2],"1/2"],[[3],"1/6"],)"
         R"([[4],"1/24"],[[5],"1/120"],[[6],"1/720"],[[7],"1/5040"],[[8],"1/40320"],[[9],"1/362880"],)"
         R"([[10],"1/3628800"]]})",
         [&] { return expand_problem(exp_doc); });
  exp_doc["morphism"] = "hurwitz";
  record("Hurwitz morphism of x is the all-ones series",
         R"({"m":1,"trunc":10,"valid":10,"ring":"Q","coeffs":[[[0],"1"],[[1],"1"],[[2],"1"],[[3],"1"],)"
         R"([[4],"1"],[[5],"1"],[[6],"1"],[[7],"1"],[[8],"1"],[[9],"1"],[[10],"1"]]})",
         [&] { return expand_problem(exp_doc); });

  record("t*t = 0 in H(F2)", R"({"m":1,"trunc":4,"valid":4,"ring":"F2","coeffs":[]})", [] {
    const HurwitzRing<PrimeField> h(PrimeField(2), 1, 4);
    return series_to_json(h, h.mul(h.variable(0), h.variable(0))).dump();
  });

  record("(1+t)^-1 in H(Q) has coefficients (-1)^n n!",
         R"({"m":1,"trunc":6,"valid":6,"ring":"Q","coeffs":[[[0],"1"],[[1],"-1"],[[2],"2"],[[3],"-6"],)"
         R"([[4],"24"],[[5],"-120"],[[6],"720"]]})",
         [] {
           const HurwitzRing<Rational> h(Rational{}, 1, 6);
           return series_to_json(h, h.invert(h.add(h.one(), h.variable(0)))).dump();
         });

  const std::string u_plus_t = R"({"m":1,"trunc":8,"valid":8,"ring":"Q[u]","coeffs":[[[0],"u"],[[1],"1"]]})";
  const Polynomial<Rational> k(Rational{}, {"u"});
  const auto d = make_differential_polynomial_ring(k, {{k.one()}});
  const HurwitzRing<Polynomial<Rational>> h(k, 1, 8);
  record("ev_twist of u with d/du is u + t", u_plus_t, [&] {
    return series_to_json(h, ev_twist(h, h.embed(k.generator(0)), d.derivations())).dump();
  });
  record("ev_untwist of u + t with d/du is u",
         R"({"m":1,"trunc":8,"valid":8,"ring":"Q[u]","coeffs":[[[0],"u"]]})", [&] {
           const auto s = h.add(h.embed(k.generator(0)), h.variable(0));
           return series_to_json(h, ev_untwist(h, s, d.derivations())).dump();
         });
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taylor morphisms and Hurwitz series over exact rings", "difftaylor"};
  app.require_subcommand(1);
  std::string fault_name;
  app.add_option("--inject-fault", fault_name)->group("")->check(CLI::IsMember({"binomial"}));

  std::string spec_path;
  std::string out_path;
  std::optional<unsigned> trunc_override;
  auto* expand_cmd = app.add_subcommand("expand", "Expand an element described by a problem JSON file");
  expand_cmd->add_option("--spec", spec_path, "Problem JSON file")->required();
  expand_cmd->add_option("--out", out_path, "Output file (default: stdout)");
  expand_cmd->add_option("--trunc-override", trunc_override, "Replace the truncation order N");

  std::string config_path;
  std::string check_out;
  std::optional<std::uint64_t> seed;
  std::string checks;
  auto* check_cmd = app.add_subcommand("check", "Run the randomized identity checks");
  check_cmd->add_option("--spec,--config", config_path, "Check configuration JSON file");
  check_cmd->add_option("--out", check_out, "Report file, one JSON object per line (default: stdout)");
  check_cmd->add_option("--seed", seed, "Override the configured seed");
  check_cmd->add_option("--checks", checks, "Comma-separated check names to run");

  auto* selftest_cmd = app.add_subcommand("selftest", "Recompute the golden examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  std::optional<fault::ScopedFault> fault_guard;
  if (fault_name == "binomial") fault_guard.emplace(fault::Kind::kBinomialTable);

  if (expand_cmd->parsed()) {
    try {
      const Json doc = parse_document(read_file(spec_path), spec_path);
      emit(expand_problem(doc, trunc_override) + "\n", out_path, out);
      return kExitOk;
    } catch (const MathDomainError& e) {
      err << "error: " << e.what() << "\n";
      return kExitMathDomain;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
  }

  if (check_cmd->parsed()) {
    CheckConfig config;
    try {
      if (!config_path.empty()) config = parse_check_config(parse_document(read_file(config_path), config_path));
      if (seed) config.seed = *seed;
      if (!checks.empty()) {
        config.checks = split_commas(checks);
        for (const auto& name : config.checks) {
          bool known = false;
          for (const auto& info : registered_checks()) known = known || info.name == name;
          if (!known) throw ValidationError("", "unknown check \"" + name + "\"");
        }
      }
      if (fault_guard) config.inject_fault = "binomial";
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
    const auto reports = run_suite(config);
    try {
      emit(reports_to_jsonl(reports), check_out, out);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
    for (const auto& r : reports) {
      if (!r.passed()) return kExitFailed;
    }
    return kExitOk;
  }

  if (selftest_cmd->parsed()) {
    bool all = true;
    for (const auto& g : run_selftest()) {
      nlohmann::ordered_json line;
      line["golden"] = g.name;
      line["status"] = g.passed() ? "pass" : "fail";
      if (!g.passed()) {
        line["expected"] = g.expected;
        line["actual"] = g.actual;
      }
      out << line.dump() << "\n";
      all = all && g.passed();
    }
    return all ? kExitOk : kExitFailed;
  }
  return kExitInvalid;
}

}  // namespace difftaylor
