#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "difftaylor/diffpoly.hpp"
#include "difftaylor/errors.hpp"
#include "difftaylor/hurwitz.hpp"

namespace difftaylor {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace json_detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(child(path, key), "required field is missing");
  return *it;
}

inline std::uint64_t require_uint(const Json& v, const std::string& path, std::uint64_t max) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ValidationError(path, "expected a non-negative integer");
  }
  const auto n = v.get<std::uint64_t>();
  if (n > max) throw ValidationError(path, "value " + std::to_string(n) + " exceeds " + std::to_string(max));
  return n;
}

inline const std::string& require_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path, "expected a string");
  return v.get_ref<const std::string&>();
}

inline const Json& require_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array");
  return v;
}

inline MultiIndex parse_multi_index(const Json& v, std::size_t m, const std::string& path) {
  require_array(v, path);
  if (v.size() != m) {
    throw ValidationError(path, "multi-index has length " + std::to_string(v.size()) +
                                    ", expected " + std::to_string(m));
  }
  std::vector<unsigned> entries;
  for (std::size_t i = 0; i < v.size(); ++i) {
    entries.push_back(static_cast<unsigned>(require_uint(v[i], child(path, i), 1U << 16)));
  }
  return MultiIndex(entries);
}

// Parses an element string, turning parser errors into path-tagged ones.
template <TextualRing R>
typename R::value_type parse_element(const R& ring, const Json& v, const std::string& path) {
  const std::string& text = require_string(v, path);
  try {
    return ring.parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(path, "cannot read \"" + text + "\" as an element of " + ring.name() +
                                    ": " + e.what());
  }
}

}  // namespace json_detail

// {m, trunc, valid, ring, coeffs: [[alpha, "element"], ...]} with nonzero
// coefficients listed in graded-lex order. Only coefficients within the
// valid order are written.
template <TextualRing R, SeriesConvention C>
OrderedJson series_to_json(const TruncatedSeriesRing<R, C>& ring, const Series<typename R::value_type>& a) {
  ring.check(a);
  OrderedJson out;
  out["m"] = a.m;
  out["trunc"] = a.trunc;
  out["valid"] = a.valid;
  out["ring"] = ring.base().name();
  OrderedJson coeffs = OrderedJson::array();
  const auto& idx = ring.indices();
  for (std::size_t k = 0; k < idx.count_upto(a.valid); ++k) {
    if (ring.base().is_zero(a.coeffs[k])) continue;
    coeffs.push_back(OrderedJson::array({idx[k].to_vector(), ring.base().format(a.coeffs[k])}));
  }
  out["coeffs"] = std::move(coeffs);
  return out;
}

// Inverse of series_to_json. Zero coefficients may be listed or omitted;
// an index may appear at most once.
template <TextualRing R, SeriesConvention C>
Series<typename R::value_type> series_from_json(const TruncatedSeriesRing<R, C>& ring, const Json& doc,
                                                const std::string& path = "") {
  using namespace json_detail;
  const auto m = require_uint(require(doc, "m", path), child(path, "m"), 64);
  const auto trunc = require_uint(require(doc, "trunc", path), child(path, "trunc"), 1U << 16);
  const auto valid = require_uint(require(doc, "valid", path), child(path, "valid"), 1U << 16);
  if (m != ring.m()) throw ValidationError(child(path, "m"), "expected m = " + std::to_string(ring.m()));
  if (trunc != ring.trunc()) {
    throw ValidationError(child(path, "trunc"), "expected trunc = " + std::to_string(ring.trunc()));
  }
  if (valid > trunc) throw ValidationError(child(path, "valid"), "valid exceeds trunc");
  if (doc.contains("ring")) {
    const std::string& name = require_string(doc["ring"], child(path, "ring"));
    if (name != ring.base().name()) {
      throw ValidationError(child(path, "ring"), "expected ring " + ring.base().name() + ", got " + name);
    }
  }
  std::vector<typename R::value_type> coeffs(ring.size(), ring.base().zero());
  std::set<std::size_t> seen;
  const std::string cpath = child(path, "coeffs");
  const Json& list = require_array(require(doc, "coeffs", path), cpath);
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string epath = child(cpath, n);
    const Json& entry = require_array(list[n], epath);
    if (entry.size() != 2) throw ValidationError(epath, "expected [multi-index, element]");
    const MultiIndex alpha = parse_multi_index(entry[0], ring.m(), child(epath, 0));
    if (alpha.total_degree() > ring.trunc()) {
      throw ValidationError(child(epath, 0), "index " + alpha.to_string() + " exceeds trunc");
    }
    const std::size_t k = ring.indices().rank(alpha);
    if (!seen.insert(k).second) throw ValidationError(child(epath, 0), "index " + alpha.to_string() + " repeated");
    coeffs[k] = parse_element(ring.base(), entry[1], child(epath, 1));
  }
  return ring.from_coefficients(std::move(coeffs), static_cast<unsigned>(valid));
}

// [{coeff, monomial: [[var, alpha, power], ...]}, ...], var as 0-based index
// on output.
template <TextualRing R>
OrderedJson diffpoly_to_json(const DiffPolyRing<R>& ring, const typename DiffPolyRing<R>::value_type& f) {
  OrderedJson out = OrderedJson::array();
  for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
    OrderedJson mono = OrderedJson::array();
    for (const auto& [sym, power] : it->first.factors) {
      mono.push_back(OrderedJson::array({sym.var, sym.order.to_vector(), power}));
    }
    OrderedJson term;
    term["coeff"] = ring.coefficients().format(it->second);
    term["monomial"] = std::move(mono);
    out.push_back(std::move(term));
  }
  return out;
}

// Reads a term list; variables may be given by index or by name.
template <TextualRing R>
typename DiffPolyRing<R>::value_type diffpoly_from_json(const DiffPolyRing<R>& ring, const Json& doc,
                                                        const std::string& path = "") {
  using namespace json_detail;
  auto out = ring.zero();
  require_array(doc, path);
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const std::string tpath = child(path, n);
    const auto c = parse_element(ring.coefficients(), require(doc[n], "coeff", tpath), child(tpath, "coeff"));
    const std::string mpath = child(tpath, "monomial");
    const Json& list = require_array(require(doc[n], "monomial", tpath), mpath);
    Monomial mono;
    for (std::size_t j = 0; j < list.size(); ++j) {
      const std::string fpath = child(mpath, j);
      const Json& factor = require_array(list[j], fpath);
      if (factor.size() != 3) throw ValidationError(fpath, "expected [variable, multi-index, power]");
      std::size_t var = 0;
      if (factor[0].is_string()) {
        try {
          var = ring.var_index(factor[0].get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ValidationError(child(fpath, 0), e.what());
        }
      } else {
        var = require_uint(factor[0], child(fpath, 0), ring.num_vars() - 1);
      }
      const MultiIndex alpha = parse_multi_index(factor[1], ring.m(), child(fpath, 1));
      const auto power = require_uint(factor[2], child(fpath, 2), 1U << 16);
      if (power == 0) throw ValidationError(child(fpath, 2), "power must be positive");
      mono = multiply_monomials(mono, Monomial{{{Symbol{var, alpha}, static_cast<unsigned>(power)}}});
    }
    out = ring.add(out, ring.term(mono, c));
  }
  return out;
}

}  // namespace difftaylor
