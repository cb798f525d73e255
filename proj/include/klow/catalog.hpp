#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "klow/error.hpp"
#include "klow/excision.hpp"
#include "klow/finite_ring.hpp"
#include "klow/homology.hpp"

#ifndef KLOW_DATA_DIR
#define KLOW_DATA_DIR "data"
#endif

namespace klow {

using json = nlohmann::json;

/// Data directory: $KLOW_DATA_DIR when set, else the build-time default.
inline std::filesystem::path default_data_dir() {
  if (const char* d = std::getenv("KLOW_DATA_DIR"); d && *d) return d;
  return KLOW_DATA_DIR;
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw BadInput("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw BadInput(p.string() + ": " + e.what(), "BadJson");
  }
}

namespace detail {

template <class T>
T field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw BadInput(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw BadInput(where + ": field '" + key + "' has the wrong type");
  }
}

inline std::vector<Elem> elem_list(const json& j, const std::string& key, const std::string& where) {
  auto v = field<std::vector<long long>>(j, key, where);
  std::vector<Elem> out;
  for (long long x : v) {
    if (x < 0) throw BadInput(where + ": negative index in '" + key + "'");
    out.push_back(static_cast<Elem>(x));
  }
  return out;
}

inline std::vector<Elem> flatten_table(const json& j, const std::string& key, std::size_t order, const std::string& where) {
  auto rows = field<std::vector<std::vector<long long>>>(j, key, where);
  if (rows.size() != order) throw BadInput(where + ": '" + key + "' must have " + std::to_string(order) + " rows");
  std::vector<Elem> out;
  for (const auto& row : rows) {
    if (row.size() != order) throw BadInput(where + ": '" + key + "' rows must have " + std::to_string(order) + " entries");
    for (long long x : row) {
      if (x < 0 || static_cast<std::size_t>(x) >= order) throw BadInput(where + ": '" + key + "' entry out of range");
      out.push_back(static_cast<Elem>(x));
    }
  }
  return out;
}

}  // namespace detail

/// One ring from a catalog entry {"name", "kind", "params"}. `lookup`
/// resolves base rings named in params.
inline RingPtr ring_from_spec(const json& spec, const std::function<RingPtr(const std::string&)>& lookup) {
  const auto name = detail::field<std::string>(spec, "name", "ring");
  const auto kind = detail::field<std::string>(spec, "kind", name);
  const json params = spec.value("params", json::object());
  const std::string where = "ring '" + name + "'";
  if (kind == "zmod") return rings::zmod(detail::field<std::size_t>(params, "n", where), name);
  if (kind == "gf")
    return rings::gf(detail::field<std::size_t>(params, "p", where), detail::field<std::size_t>(params, "k", where),
                     detail::field<std::vector<long>>(params, "poly", where), name);
  if (kind == "matrix")
    return rings::matrix_ring(lookup(detail::field<std::string>(params, "base", where)),
                              detail::field<std::size_t>(params, "n", where), name);
  if (kind == "triangular2") return rings::triangular2(lookup(detail::field<std::string>(params, "base", where)), name);
  if (kind == "dual") return rings::dual_numbers(lookup(detail::field<std::string>(params, "base", where)), name);
  if (kind == "square_zero") return rings::square_zero(detail::field<std::size_t>(params, "n", where), name);
  if (kind == "product") {
    const auto f = detail::field<std::vector<std::string>>(params, "factors", where);
    if (f.size() != 2) throw BadInput(where + ": product takes exactly two factors");
    return rings::direct_product(lookup(f[0]), lookup(f[1]), name);
  }
  if (kind == "table") {
    const auto order = detail::field<std::size_t>(params, "order", where);
    if (order == 0 || order > FiniteRing::max_order) throw BadInput(where + ": order out of range");
    auto add = detail::flatten_table(params, "add", order, where);
    auto mul = detail::flatten_table(params, "mul", order, where);
    const auto zero = detail::field<std::size_t>(params, "zero", where);
    std::optional<Elem> one;
    if (params.contains("one")) one = static_cast<Elem>(detail::field<std::size_t>(params, "one", where));
    if (zero >= order || (one && *one >= order)) throw BadInput(where + ": zero/one out of range");
    return rings::table(name, order, std::move(add), std::move(mul), static_cast<Elem>(zero), one);
  }
  throw BadInput(where + ": unknown kind '" + kind + "'");
}

struct RingEntry {
  std::string name;
  std::string kind;
  RingPtr ring;
};

/// Named rings in file order. Entries may refer to earlier entries as bases.
class RingCatalog {
 public:
  static RingCatalog from_json(const json& j) {
    if (!j.is_array()) throw BadInput("ring catalog must be a JSON array");
    RingCatalog c;
    for (const auto& spec : j) {
      auto lookup = [&c](const std::string& n) { return c.get(n); };
      RingEntry e{detail::field<std::string>(spec, "name", "ring"), detail::field<std::string>(spec, "kind", "ring"), nullptr};
      if (c.index_.count(e.name)) throw BadInput("ring catalog: duplicate name '" + e.name + "'");
      e.ring = ring_from_spec(spec, lookup);
      c.index_[e.name] = c.entries_.size();
      c.entries_.push_back(std::move(e));
    }
    return c;
  }

  static RingCatalog load(const std::filesystem::path& p) { return from_json(read_json_file(p)); }

  const RingPtr& get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw BadInput("unknown ring '" + name + "'", "UnknownRing");
    return entries_[it->second].ring;
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<RingEntry>& entries() const { return entries_; }

 private:
  std::vector<RingEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

inline Rational parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw BadInput(where + ": rationals are given as \"p/q\" strings");
  const auto s = v.get<std::string>();
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw BadInput(where + ": bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

/// {"name", "dim", "constants": ["p/q", ...], "unit"?}; validated.
inline RationalAlgebra algebra_from_json(const json& j) {
  RationalAlgebra a;
  a.name = detail::field<std::string>(j, "name", "algebra");
  const std::string where = "algebra '" + a.name + "'";
  a.dim = detail::field<std::size_t>(j, "dim", where);
  if (!j.contains("constants") || !j["constants"].is_array()) throw BadInput(where + ": missing constants array");
  for (const auto& v : j["constants"]) a.constants.push_back(parse_rational(v, where));
  if (j.contains("unit")) {
    std::vector<Rational> u;
    for (const auto& v : j["unit"]) u.push_back(parse_rational(v, where));
    a.unit = std::move(u);
  }
  validate_algebra(a);
  return a;
}

inline json algebra_to_json(const RationalAlgebra& a) {
  json j{{"name", a.name}, {"dim", a.dim}};
  json c = json::array();
  for (const auto& x : a.constants) c.push_back(x.get_str());
  j["constants"] = c;
  if (a.unit) {
    json u = json::array();
    for (const auto& x : *a.unit) u.push_back(x.get_str());
    j["unit"] = u;
  }
  return j;
}

class AlgebraCatalog {
 public:
  static AlgebraCatalog from_json(const json& j) {
    if (!j.is_array()) throw BadInput("algebra catalog must be a JSON array");
    AlgebraCatalog c;
    for (const auto& spec : j) {
      auto a = algebra_from_json(spec);
      if (c.index_.count(a.name)) throw BadInput("algebra catalog: duplicate name '" + a.name + "'");
      c.index_[a.name] = c.entries_.size();
      c.entries_.push_back(std::move(a));
    }
    return c;
  }

  static AlgebraCatalog load(const std::filesystem::path& p) { return from_json(read_json_file(p)); }

  const RationalAlgebra& get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw BadInput("unknown algebra '" + name + "'", "UnknownAlgebra");
    return entries_[it->second];
  }

  const std::vector<RationalAlgebra>& entries() const { return entries_; }

 private:
  std::vector<RationalAlgebra> entries_;
  std::map<std::string, std::size_t> index_;
};

/// {"name"?, "B", "ideal": [idx], "C", "proj": [map], "section"?} with B and C
/// naming catalog rings; validated.
inline Extension extension_from_json(const json& j, const RingCatalog& rings) {
  Extension e;
  e.B = rings.get(detail::field<std::string>(j, "B", "extension"));
  e.C = rings.get(detail::field<std::string>(j, "C", "extension"));
  e.name = j.value("name", e.B->name() + "->" + e.C->name());
  e.ideal = detail::elem_list(j, "ideal", "extension");
  e.proj = RingMap{e.B, e.C, detail::elem_list(j, "proj", "extension")};
  if (j.contains("section")) e.section = RingMap{e.C, e.B, detail::elem_list(j, "section", "extension")};
  validate_extension(e);
  return e;
}

inline json extension_to_json(const Extension& e) {
  json j{{"name", e.name}, {"B", e.B->name()}, {"C", e.C->name()}, {"ideal", e.ideal}, {"proj", e.proj.images}};
  if (e.section) j["section"] = e.section->images;
  return j;
}

/// Resolves an extension argument: an existing file, else
/// <data>/extensions/<arg>.json.
inline std::filesystem::path extension_path(const std::string& arg, const std::filesystem::path& data_dir) {
  if (std::filesystem::is_regular_file(arg)) return arg;
  auto p = data_dir / "extensions" / (arg + ".json");
  if (std::filesystem::is_regular_file(p)) return p;
  throw BadInput("unknown extension '" + arg + "'", "UnknownExtension");
}

}  // namespace klow
