#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "klow/cache.hpp"
#include "klow/catalog.hpp"
#include "klow/cone.hpp"
#include "klow/excision.hpp"
#include "klow/homology.hpp"
#include "klow/kone.hpp"
#include "klow/kzero.hpp"
#include "klow/toeplitz.hpp"

namespace klow::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Caveats attached to a report. Every report that rests on a finite
/// truncation or an uncertified stabilization sets the matching flag.
struct Flags {
  bool finite_truncation = false;
  bool stabilization = false;
  std::vector<std::string> caveats;

  void truncation(std::string why) {
    finite_truncation = true;
    caveats.push_back(std::move(why));
  }
  void unstable(std::string why) {
    stabilization = true;
    caveats.push_back(std::move(why));
  }
  json to_json() const {
    return {{"finite_truncation", finite_truncation}, {"stabilization", stabilization}, {"caveats", caveats}};
  }
};

/// Payload of one invocation before it is wrapped into the run report.
struct Outcome {
  json inputs = json::object();
  json results = json::object();
  Flags flags;
  ExitCode code = ExitCode::ok;
};

inline std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline json big_json(const BigInt& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline json group_json(const PresentedAbelianGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion) t.push_back(big_json(d));
  return {{"free_rank", g.free_rank}, {"torsion", t}};
}

inline json vector_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(big_json(x));
  return a;
}

inline json matrix_json(const RMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json check_json(const IdentityCheck& c) {
  return {{"identity", c.identity}, {"pass", c.pass}, {"witness", c.witness}};
}

inline RMatrix parse_matrix(const std::string& text, const RingPtr& r) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw BadInput("element must be a JSON matrix such as [[1,0],[0,2]], got '" + text + "'");
  }
  if (!j.is_array() || j.empty()) throw BadInput("element must be a non-empty square JSON matrix");
  const std::size_t n = j.size();
  std::vector<Elem> e;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw BadInput("element must be a square JSON matrix");
    for (const auto& x : row) {
      if (!x.is_number_integer() || x.get<long long>() < 0) throw BadInput("matrix entries are carrier indices >= 0");
      e.push_back(static_cast<Elem>(x.get<long long>()));
    }
  }
  return RMatrix(r, n, std::move(e));
}

/// Everything a command needs besides its own arguments.
class Context {
 public:
  Budgets budgets;
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> cache_dir;
  std::ostream* err = nullptr;

  const RingCatalog& rings() {
    if (!rings_) rings_ = RingCatalog::load(data_dir / "rings.json");
    return *rings_;
  }

  const AlgebraCatalog& algebras() {
    if (!algebras_) algebras_ = AlgebraCatalog::load(data_dir / "algebras.json");
    return *algebras_;
  }

  /// A catalog algebra by name, or an algebra JSON file.
  RationalAlgebra algebra(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) return algebra_from_json(read_json_file(arg));
    return algebras().get(arg);
  }

  Extension extension(const std::string& arg) {
    return extension_from_json(read_json_file(extension_path(arg, data_dir)), rings());
  }

  GroupStore* store() {
    if (!cache_dir) return nullptr;
    if (!store_) store_ = std::make_unique<FileGroupStore>(*cache_dir, err);
    return store_.get();
  }

  FileGroupStore& file_store() {
    if (!cache_dir) throw BadInput("no cache directory configured (use --cache-dir, KLOW_CACHE or the config file)");
    store();
    return *store_;
  }

 private:
  std::optional<RingCatalog> rings_;
  std::optional<AlgebraCatalog> algebras_;
  std::unique_ptr<FileGroupStore> store_;
};

/// Applies {"budgets": {...}, "cache_dir": path} from a config file.
inline void apply_config(const json& cfg, Budgets& budgets, std::optional<std::filesystem::path>& cache_dir) {
  if (!cfg.is_object()) throw BadInput("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "cache_dir") {
      if (!value.is_string()) throw BadInput("config: cache_dir must be a string");
      cache_dir = value.get<std::string>();
    } else if (key == "budgets") {
      if (!value.is_object()) throw BadInput("config: budgets must be an object");
      for (const auto& [b, v] : value.items()) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
          throw BadInput("config: budget '" + b + "' must be a positive integer");
        const auto x = v.get<std::uint64_t>();
        if (b == "gl_candidates") budgets.gl_candidates = x;
        else if (b == "tensor_dim") budgets.tensor_dim = x;
        else if (b == "closure_elements") budgets.closure_elements = x;
        else if (b == "idempotent_nodes") budgets.idempotent_nodes = x;
        else throw BadInput("config: unknown budget '" + b + "'");
      }
    } else {
      throw BadInput("config: unknown key '" + key + "'");
    }
  }
}

namespace commands {

inline Outcome ring_list(Context& ctx) {
  Outcome o;
  json list = json::array();
  json digests = json::array();
  for (const auto& e : ctx.rings().entries()) {
    list.push_back({{"name", e.name},
                    {"kind", e.kind},
                    {"order", e.ring->order()},
                    {"unital", e.ring->has_one()},
                    {"commutative", e.ring->is_commutative()}});
    digests.push_back(e.ring->digest());
  }
  o.inputs = {{"rings", digests}};
  o.results = {{"rings", list}};
  return o;
}

inline Outcome ring_show(Context& ctx, const std::string& name) {
  const auto& r = ctx.rings().get(name);
  Outcome o;
  o.inputs = {{"ring", r->digest()}};
  json add = json::array(), mul = json::array();
  for (Elem a = 0; a < r->order(); ++a) {
    json ra = json::array(), rm = json::array();
    for (Elem b = 0; b < r->order(); ++b) {
      ra.push_back(r->add(a, b));
      rm.push_back(r->mul(a, b));
    }
    add.push_back(ra);
    mul.push_back(rm);
  }
  o.results = {{"name", r->name()},
               {"order", r->order()},
               {"zero", r->zero()},
               {"one", r->has_one() ? json(r->one()) : json(nullptr)},
               {"unital", r->has_one()},
               {"commutative", r->is_commutative()},
               {"char_exponent", r->char_exponent()},
               {"units", r->units()},
               {"digest", r->digest()},
               {"add", add},
               {"mul", mul}};
  return o;
}

/// Largest level whose idempotent search stays desk-sized.
inline std::size_t default_k0_level(const RingPtr& r) {
  if (r->order() <= 5) return 3;
  if (r->order() <= 64) return 2;
  return 1;
}

inline json k0_classes_json(const K0Report& rep) {
  json classes = json::array();
  for (const auto& c : rep.classes) classes.push_back({{"level", c.level}, {"rep", matrix_json(c.representative)}});
  return classes;
}

inline Outcome k0(Context& ctx, const std::string& ring, std::optional<std::size_t> nmax) {
  const auto& r = ctx.rings().get(ring);
  const std::size_t n = nmax.value_or(default_k0_level(r));
  Outcome o;
  o.inputs = {{"ring", r->digest()}, {"n_max", n}};
  if (r->has_one()) {
    const auto rep = k0_report(r, n, ctx.budgets);
    o.results = {{"ring", r->name()},          {"n_max", n},
                 {"classes", k0_classes_json(rep)}, {"k0", group_json(rep.k0)},
                 {"stabilized", rep.stabilized},   {"rank_map_iso", rep.rank_map_iso}};
    if (!rep.stabilized) o.flags.unstable("K0 classes certified only up to level " + std::to_string(n));
  } else {
    const auto nk = nonunital_k0(r, r->char_exponent(), n, ctx.budgets);
    o.results = {{"ring", r->name()},
                 {"n_max", n},
                 {"unitalization", nk.tilde.ring->name()},
                 {"classes", k0_classes_json(nk.tilde_report)},
                 {"k0", group_json(nk.k0())},
                 {"stabilized", nk.tilde_report.stabilized}};
    o.flags.truncation("nonunital K0 computed in the unitalization over Z/" + std::to_string(r->char_exponent()));
    if (!nk.tilde_report.stabilized) o.flags.unstable("K0 classes certified only up to level " + std::to_string(n));
  }
  return o;
}

inline Outcome k1(Context& ctx, const std::string& ring, std::vector<std::size_t> levels) {
  const auto& r = ctx.rings().get(ring);
  Outcome o;
  if (r->has_one()) {
    const auto rep = k1_report(r, levels, ctx.budgets, ctx.store());
    json lv = json::array();
    std::vector<std::size_t> ns;
    for (const auto& l : rep.levels) {
      lv.push_back({{"n", l.n}, {"k1", group_json(l.k1)}, {"strategy", l.strategy}, {"complete", l.complete}});
      ns.push_back(l.n);
    }
    o.inputs = {{"ring", r->digest()}, {"levels", ns}};
    o.results = {{"ring", r->name()},
                 {"levels", lv},
                 {"k1", group_json(rep.top().k1)},
                 {"stable", rep.stable ? json(*rep.stable) : json(nullptr)},
                 {"units_map_injective", rep.units_map_injective},
                 {"units_map_surjective", rep.units_map_surjective}};
    if (!rep.stable.value_or(false))
      o.flags.unstable("K1 computed at finite level(s); stability from level 2 to 3 not certified");
    for (const auto& l : rep.levels)
      if (!l.complete) o.flags.unstable("GL_" + std::to_string(l.n) + " cosets generated, not certified against |GL_n|");
  } else {
    const std::size_t n = levels.empty() ? 2 : levels.back();
    const auto nk = nonunital_k1(r, r->char_exponent(), n, ctx.budgets, ctx.store());
    o.inputs = {{"ring", r->digest()}, {"levels", {n}}};
    o.results = {{"ring", r->name()},
                 {"levels", json::array({{{"n", n}, {"k1", group_json(nk.k1())}}})},
                 {"k1", group_json(nk.k1())},
                 {"unitalization", nk.tilde.ring->name()},
                 {"kernel_agrees", nk.kernel_agrees}};
    o.flags.truncation("nonunital K1 computed in the unitalization over Z/" + std::to_string(r->char_exponent()));
    o.flags.unstable("K1 computed at level " + std::to_string(n) + " only");
  }
  return o;
}

inline Outcome boundary(Context& ctx, const std::string& ext, const std::string& element) {
  const Extension e = ctx.extension(ext);
  const RMatrix g = parse_matrix(element, e.C);
  const auto k0a = nonunital_k0(e.A(), e.B->char_exponent(), 2 * g.n, ctx.budgets);
  const RMatrix ginv = inverse_or_throw(g);
  const RMatrix lift = lexicographic_lift(e, g), lift_star = lexicographic_lift(e, ginv);
  const auto res = boundary_class(e, k0a, g, lift, lift_star);
  Outcome o;
  o.inputs = {{"extension", extension_to_json(e)}, {"B", e.B->digest()}, {"C", e.C->digest()}, {"element", matrix_json(g)}};
  o.results = {{"extension", e.name},
               {"element", matrix_json(g)},
               {"lift", matrix_json(lift)},
               {"lift_star", matrix_json(lift_star)},
               {"h", matrix_json(res.h)},
               {"idempotent", matrix_json(res.idempotent)},
               {"k0a", group_json(k0a.k0())},
               {"class", vector_json(k0a.k0().reduce(res.k0a))}};
  o.flags.truncation("K0(A) computed in the unitalization over Z/" + std::to_string(e.B->char_exponent()));
  return o;
}

inline Outcome exactness(Context& ctx, const std::string& ext) {
  const Extension e = ctx.extension(ext);
  const SixTermLevels levels;
  const auto rep = six_term_check(e, ctx.budgets, levels, ctx.store());
  Outcome o;
  o.inputs = {{"extension", extension_to_json(e)}, {"B", e.B->digest()}, {"C", e.C->digest()}};
  json nodes = json::array();
  for (const auto& n : rep.nodes)
    nodes.push_back({{"at", n.at},
                     {"image_order", n.image_order ? big_json(*n.image_order) : json(nullptr)},
                     {"kernel_order", n.kernel_order ? big_json(*n.kernel_order) : json(nullptr)},
                     {"exact", n.exact}});
  o.results = {{"extension", e.name},
               {"groups",
                {{"K1A", group_json(rep.k1a)},
                 {"K1B", group_json(rep.k1b)},
                 {"K1C", group_json(rep.k1c)},
                 {"K0A", group_json(rep.k0a)},
                 {"K0B", group_json(rep.k0b)},
                 {"K0C", group_json(rep.k0c)}}},
               {"nodes", nodes},
               {"exact", rep.exact()},
               {"boundary_additive", rep.boundary_additive},
               {"k1a_kernel_agrees", rep.k1a_kernel_agrees},
               {"k0a_b_injective", rep.k0a_b_injective ? json(*rep.k0a_b_injective) : json(nullptr)}};
  o.flags.truncation("nonunital groups computed in the unitalization over Z/" + std::to_string(e.B->char_exponent()));
  o.flags.unstable("K1 at level " + std::to_string(levels.k1_level) + ", K0 certified to level " +
                   std::to_string(levels.k0_nmax));
  const bool ok = rep.exact() && rep.boundary_additive && rep.k1a_kernel_agrees && rep.k0a_b_injective.value_or(true);
  if (!ok) o.code = ExitCode::verification_failed;
  return o;
}

inline Outcome swan(Context& ctx, const std::string& field) {
  const auto& k = ctx.rings().get(field);
  const auto rep = swan_check(k, ctx.budgets, ctx.store());
  Outcome o;
  o.inputs = {{"field", k->digest()}};
  json w = json::array();
  for (const auto& x : rep.witnesses)
    w.push_back({{"lambda", x.lambda},
                 {"mu", x.mu},
                 {"x", x.x},
                 {"y", x.y},
                 {"commutator", x.commutator},
                 {"expected", x.expected},
                 {"holds", x.holds}});
  o.results = {{"field", rep.field},
               {"relative_k1", group_json(rep.relative_k1)},
               {"ideal_k1", group_json(rep.ideal_k1)},
               {"field_additive", group_json(rep.field_additive)},
               {"ideal_kernel_agrees", rep.ideal_kernel_agrees},
               {"t_strategy", rep.t_strategy},
               {"t_complete", rep.t_complete},
               {"witnesses", w},
               {"pass", rep.pass()}};
  o.flags.truncation("K1(I) computed in the unitalization over Z/" + std::to_string(k->char_exponent()));
  o.flags.unstable("K1 groups at level 2");
  if (!rep.t_complete) o.flags.unstable("GL_2(T) cosets generated, not certified against |GL_2|");
  if (!rep.pass()) o.code = ExitCode::verification_failed;
  return o;
}

/// Largest n <= cap with dim^(n+2) tensors within budget, since degree n
/// needs the complex one degree higher.
inline std::size_t default_degree(const RationalAlgebra& a, const Budgets& b, std::size_t cap) {
  std::size_t n = cap;
  for (;;) {
    double t = 1;
    for (std::size_t i = 0; i < n + 2; ++i) t *= static_cast<double>(a.dim);
    if (t <= static_cast<double>(b.tensor_dim) || n == 0) return n;
    --n;
  }
}

inline Outcome hc(Context& ctx, const std::string& alg, std::optional<std::size_t> nmax) {
  const auto a = ctx.algebra(alg);
  const std::size_t n = nmax.value_or(default_degree(a, ctx.budgets, 4));
  const auto h = cyclic_homology(a, n, ctx.budgets);
  const std::size_t oracle = hc0_oracle(a);
  Outcome o;
  o.inputs = {{"algebra", algebra_to_json(a)}, {"n_max", n}};
  o.results = {{"algebra", a.name}, {"n_max", n}, {"hc", h}, {"hc0_oracle", oracle}, {"hc0_matches", h[0] == oracle}};
  if (h[0] != oracle) o.code = ExitCode::verification_failed;
  return o;
}

inline Outcome hbar(Context& ctx, const std::string& alg, std::optional<std::size_t> nmax) {
  const auto a = ctx.algebra(alg);
  const std::size_t n = nmax.value_or(default_degree(a, ctx.budgets, 4));
  Outcome o;
  o.inputs = {{"algebra", algebra_to_json(a)}, {"n_max", n}};
  o.results = {{"algebra", a.name}, {"n_max", n}, {"hbar", bar_homology(a, n, ctx.budgets)}, {"unital", a.unit.has_value()}};
  return o;
}

inline Outcome excision_verdict(Context& ctx, const std::string& alg, std::optional<std::size_t> nmax) {
  const auto a = ctx.algebra(alg);
  const std::size_t n = nmax.value_or(default_degree(a, ctx.budgets, 3));
  Outcome o;
  o.inputs = {{"algebra", algebra_to_json(a)}, {"n_max", n}};
  if (a.unit) {
    // unital algebras are K-excisive; the check left is that H^bar vanishes
    const auto h = bar_homology(a, n, ctx.budgets);
    const bool vanishes = std::all_of(h.begin(), h.end(), [](std::size_t x) { return x == 0; });
    o.results = {{"algebra", a.name},
                 {"unital", true},
                 {"hbar", h},
                 {"verdict",
                  {{"obstructed", false},
                   {"hbar_vanishes", vanishes},
                   {"checked_up_to", n},
                   {"text", "unital algebra: K-excisive; H^bar checked up to degree " + std::to_string(n)}}}};
    if (!vanishes) o.code = ExitCode::verification_failed;
    return o;
  }
  const auto v = excisiveness_verdict(a, n, ctx.budgets);
  json verdict = {{"obstructed", v.obstructed},
                  {"checked_up_to", v.checked_up_to},
                  {"hidden_unit", v.hidden_unit},
                  {"text", v.describe()}};
  if (v.obstructed) {
    verdict["degree"] = v.degree;
    verdict["dim"] = v.dim;
  }
  o.results = {{"algebra", a.name}, {"unital", false}, {"hbar", v.hbar}, {"verdict", verdict}};
  return o;
}

struct VerifyOptions {
  std::vector<std::string> rings;  ///< empty: per-suite defaults
  std::optional<std::size_t> window;
  std::size_t whitehead_count = 100;
  std::uint32_t seed = 1;
};

inline void run_suite(Context& ctx, const std::string& suite, const VerifyOptions& opt, json& checks, json& digests) {
  auto rings_for = [&](std::vector<std::string> defaults) { return opt.rings.empty() ? defaults : opt.rings; };
  auto push = [&](const std::string& ring, const IdentityCheck& c) {
    json j = check_json(c);
    j["suite"] = suite;
    j["ring"] = ring;
    checks.push_back(j);
  };
  if (suite == "cone") {
    const std::size_t w = opt.window.value_or(64);
    for (const auto& name : rings_for({"F2", "Z4"})) {
      const auto& r = ctx.rings().get(name);
      digests.push_back(r->digest());
      for (const auto& c : cone_checks(r, w, opt.seed)) push(name, c);
    }
  } else if (suite == "toeplitz") {
    const std::size_t w = opt.window.value_or(16);
    for (const auto& name : rings_for({"F3", "Z4"})) {
      const auto& r = ctx.rings().get(name);
      digests.push_back(r->digest());
      for (const auto& c : toeplitz_checks(r, w, opt.seed)) push(name, c);
    }
  } else if (suite == "whitehead") {
    std::mt19937 rng(opt.seed);
    for (const auto& name : rings_for({"Z5", "F4"})) {
      const auto& r = ctx.rings().get(name);
      digests.push_back(r->digest());
      push(name, whitehead_suite(r, 2, opt.whitehead_count, rng));
    }
  } else if (suite == "structural") {
    for (const auto& name : rings_for({"F2", "F3", "Z4", "F4", "F5"})) {
      const auto& r = ctx.rings().get(name);
      digests.push_back(r->digest());
      for (const auto& c : structural_identities_check(r)) push(name, c);
    }
  } else {
    throw BadInput("unknown suite '" + suite + "' (cone, toeplitz, whitehead, structural, all)");
  }
}

inline Outcome verify(Context& ctx, const std::string& suite, const VerifyOptions& opt) {
  json checks = json::array(), digests = json::array();
  const std::vector<std::string> suites =
      suite == "all" ? std::vector<std::string>{"cone", "toeplitz", "whitehead", "structural"} : std::vector<std::string>{suite};
  for (const auto& s : suites) run_suite(ctx, s, opt, checks, digests);
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c["pass"].get<bool>() ? 1 : 0;
  Outcome o;
  o.inputs = {{"suite", suite},
              {"rings", digests},
              {"window", opt.window ? json(*opt.window) : json(nullptr)},
              {"seed", opt.seed},
              {"whitehead_count", opt.whitehead_count}};
  o.results = {{"suite", suite},
               {"checks", checks},
               {"passed", passed},
               {"failed", checks.size() - passed},
               {"pass", passed == checks.size()}};
  if (passed != checks.size()) o.code = ExitCode::verification_failed;
  return o;
}

inline Outcome cache_clear(Context& ctx) {
  Outcome o;
  o.results = {{"removed", ctx.file_store().clear()}};
  return o;
}

}  // namespace commands

inline json error_json(const std::string& kind, const std::string& message, int code) {
  return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

/// Parses argv, runs one command and writes one JSON report to `out`.
/// Diagnostics and error objects go to `err`. Returns the exit code.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact lower K-theory and cyclic homology workbench", "klow"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, cache_dir, data_dir;
  bool no_cache = false, no_timing = false, pretty = false;
  std::optional<std::uint64_t> gl_candidates, tensor_dim;
  app.add_option("--config", config_path, "config file (JSON)");
  app.add_option("--cache-dir", cache_dir, "cache directory (overrides KLOW_CACHE)");
  app.add_flag("--no-cache", no_cache, "disable the result cache");
  app.add_option("--data-dir", data_dir, "catalog directory");
  app.add_option("--gl-candidates", gl_candidates, "budget: max |R|^(n^2) for brute GL enumeration");
  app.add_option("--tensor-dim", tensor_dim, "budget: max basis tensors per homology degree");
  app.add_flag("--no-timing", no_timing, "omit the timing field");
  app.add_flag("--pretty", pretty, "indent the JSON report");
  app.set_version_flag("--version", kVersion);

  auto* ring = app.add_subcommand("ring", "list or show catalog rings");
  std::string ring_action, ring_name;
  ring->add_option("action", ring_action, "list | show")->required()->check(CLI::IsMember({"list", "show"}));
  ring->add_option("name", ring_name, "ring name (for show)");

  auto* k0 = app.add_subcommand("k0", "K0 of a catalog ring");
  std::string k0_ring;
  std::optional<std::size_t> k0_nmax;
  k0->add_option("ring", k0_ring)->required();
  k0->add_option("--nmax", k0_nmax, "top idempotent level");

  auto* k1 = app.add_subcommand("k1", "K1 of a catalog ring");
  std::string k1_ring;
  std::vector<std::size_t> k1_levels;
  k1->add_option("ring", k1_ring)->required();
  k1->add_option("--levels", k1_levels, "matrix levels, e.g. --levels 2,3")->delimiter(',');

  auto* bnd = app.add_subcommand("boundary", "excision boundary of a unit over C");
  std::string bnd_ext, bnd_elem;
  bnd->add_option("--extension", bnd_ext, "extension name or file")->required();
  bnd->add_option("--element", bnd_elem, "invertible matrix over C as JSON, e.g. [[2]]")->required();

  auto* exa = app.add_subcommand("exactness", "six-term exactness verdicts");
  std::string exa_ext;
  exa->add_option("--extension", exa_ext, "extension name or file")->required();

  auto* sw = app.add_subcommand("swan", "Swan's example over a finite field");
  std::string sw_field;
  sw->add_option("--field", sw_field, "F3, F4 or F5")->required();

  std::string alg;
  std::optional<std::size_t> alg_nmax;
  auto* hcc = app.add_subcommand("hc", "cyclic homology of a Q-algebra");
  hcc->add_option("algebra", alg)->required();
  hcc->add_option("--nmax", alg_nmax);
  auto* hb = app.add_subcommand("hbar", "bar homology of a Q-algebra");
  hb->add_option("algebra", alg)->required();
  hb->add_option("--nmax", alg_nmax);
  auto* ev = app.add_subcommand("excision-verdict", "K-excisiveness obstruction from bar homology");
  ev->add_option("algebra", alg)->required();
  ev->add_option("--nmax", alg_nmax);

  auto* ver = app.add_subcommand("verify", "identity suites");
  std::string suite;
  commands::VerifyOptions vopt;
  std::optional<std::size_t> window;
  ver->add_option("suite", suite, "cone | toeplitz | whitehead | structural | all")
      ->required()
      ->check(CLI::IsMember({"cone", "toeplitz", "whitehead", "structural", "all"}));
  ver->add_option("--ring", vopt.rings, "restrict to these rings")->delimiter(',');
  ver->add_option("--window", window, "window size");
  ver->add_option("--count", vopt.whitehead_count, "random matrices per ring for whitehead");
  ver->add_option("--seed", vopt.seed, "random seed");

  auto* cache = app.add_subcommand("cache", "cache maintenance");
  std::string cache_action;
  cache->add_option("action", cache_action, "clear")->required()->check(CLI::IsMember({"clear"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", e.what(), 4).dump() << "\n";
    return static_cast<int>(ExitCode::bad_input);
  }

  const auto start = std::chrono::steady_clock::now();
  std::string command;
  for (std::size_t i = 0; i < args.size(); ++i) command += (i ? " " : "") + args[i];
  try {
    Context ctx;
    ctx.err = &err;
    std::optional<std::filesystem::path> config_cache;
    if (config_path.empty())
      if (const char* c = std::getenv("KLOW_CONFIG"); c && *c) config_path = c;
    if (!config_path.empty()) apply_config(read_json_file(config_path), ctx.budgets, config_cache);
    if (gl_candidates) ctx.budgets.gl_candidates = *gl_candidates;
    if (tensor_dim) ctx.budgets.tensor_dim = *tensor_dim;
    ctx.data_dir = data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir);
    if (!cache_dir.empty()) ctx.cache_dir = cache_dir;
    else if (const char* c = std::getenv("KLOW_CACHE"); c && *c) ctx.cache_dir = c;
    else ctx.cache_dir = config_cache;
    if (no_cache) ctx.cache_dir.reset();

    Outcome o;
    if (*ring) {
      if (ring_action == "list") o = commands::ring_list(ctx);
      else if (ring_name.empty()) throw BadInput("ring show needs a ring name");
      else o = commands::ring_show(ctx, ring_name);
    } else if (*k0) {
      o = commands::k0(ctx, k0_ring, k0_nmax);
    } else if (*k1) {
      o = commands::k1(ctx, k1_ring, k1_levels);
    } else if (*bnd) {
      o = commands::boundary(ctx, bnd_ext, bnd_elem);
    } else if (*exa) {
      o = commands::exactness(ctx, exa_ext);
    } else if (*sw) {
      o = commands::swan(ctx, sw_field);
    } else if (*hcc) {
      o = commands::hc(ctx, alg, alg_nmax);
    } else if (*hb) {
      o = commands::hbar(ctx, alg, alg_nmax);
    } else if (*ev) {
      o = commands::excision_verdict(ctx, alg, alg_nmax);
    } else if (*ver) {
      vopt.window = window;
      o = commands::verify(ctx, suite, vopt);
    } else {
      o = commands::cache_clear(ctx);
    }

    json report = {{"command", command},
                   {"inputs_digest", hex64(detail::fnv1a(o.inputs.dump()))},
                   {"results", o.results},
                   {"flags", o.flags.to_json()},
                   {"version", kVersion},
                   {"exit_code", static_cast<int>(o.code)}};
    if (!no_timing) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      report["timing"] = {{"wall_ms", ms}};
    }
    out << (pretty ? report.dump(2) : report.dump()) << "\n";
    return static_cast<int>(o.code);
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what(), static_cast<int>(e.exit_code())).dump() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const json::exception& e) {
    err << error_json("BadJson", e.what(), 4).dump() << "\n";
    return static_cast<int>(ExitCode::bad_input);
  } catch (const std::bad_alloc&) {
    err << error_json("BudgetExceeded", "out of memory", 3).dump() << "\n";
    return static_cast<int>(ExitCode::budget_exceeded);
  } catch (const std::exception& e) {
    err << error_json("InternalError", e.what(), 1).dump() << "\n";
    return 1;
  }
}

}  // namespace klow::cli
