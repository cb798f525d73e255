// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "klow/catalog.hpp"
#include "klow/cone.hpp"
#include "klow/excision.hpp"
#include "klow/homology.hpp"
#include "klow/kone.hpp"
#include "klow/kzero.hpp"
#include "klow/toeplitz.hpp"

#ifndef KLOW_CLI_PATH
#error "KLOW_CLI_PATH must name the klow executable"
#endif

using namespace klow;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;  // 0 means no runtime bound
  std::function<Verdict()> run;
};

const Budgets budgets{};

const RingCatalog& rings_db() {
  static const RingCatalog c = RingCatalog::load(default_data_dir() / "rings.json");
  return c;
}

Extension extension(const std::string& name) {
  return extension_from_json(read_json_file(extension_path(name, default_data_dir())), rings_db());
}

std::string show(const PresentedAbelianGroup& g) {
  std::ostringstream s;
  s << "Z^" << g.free_rank;
  for (const auto& d : g.torsion) s << " + Z/" << d.get_str();
  return s.str();
}

bool is_group(const PresentedAbelianGroup& g, std::size_t free_rank, std::vector<long> torsion) {
  std::vector<BigInt> t(torsion.begin(), torsion.end());
  return g.free_rank == free_rank && g.torsion == t;
}

void absorb(Verdict& v, const std::string& ring, const std::vector<IdentityCheck>& checks) {
  for (const auto& c : checks) v.require(c.pass, ring + ": " + c.identity + " [" + c.witness + "]");
}

Verdict golden_table() {
  Verdict v;
  const std::vector<std::pair<std::string, std::size_t>> k0 = {{"F2", 1}, {"F3", 1}, {"Z4", 1}, {"F2xF2", 2}, {"M2F2", 1}};
  for (const auto& [name, rank] : k0) {
    const auto& r = rings_db().get(name);
    const std::size_t level = r->order() <= 5 ? 3 : 2;
    const auto rep = k0_report(r, level, budgets);
    v.require(is_group(rep.k0, rank, {}), "K0(" + name + ") = " + show(rep.k0));
  }
  const std::vector<std::pair<std::string, std::vector<long>>> k1 = {
      {"F3", {2}}, {"F4", {3}}, {"F5", {4}}, {"Z4", {2}}, {"F3eps", {6}}, {"M2F2", {}}};
  for (const auto& [name, torsion] : k1) {
    const auto rep = k1_report(rings_db().get(name), {}, budgets);
    v.require(is_group(rep.top().k1, 0, torsion), "K1(" + name + ") = " + show(rep.top().k1));
    v.require(rep.top().complete, "K1(" + name + ") coset count not certified");
  }
  return v;
}

Verdict swan() {
  Verdict v;
  const auto rep = swan_check(rings_db().get("F3"), budgets);
  v.require(rep.relative_k1.trivial(), "K1(T:I) = " + show(rep.relative_k1));
  v.require(is_group(rep.ideal_k1, 0, {3}), "K1(I) = " + show(rep.ideal_k1));
  v.require(rep.ideal_kernel_agrees, "K1(I) image and kernel disagree");
  v.require(rep.witnesses.size() == 3, "expected one witness per lambda in F3");
  for (const auto& w : rep.witnesses) {
    v.require(w.mu == 2, "mu = " + std::to_string(w.mu));
    v.require(w.holds, "witness fails for lambda = " + std::to_string(w.lambda));
  }
  return v;
}

Verdict six_term() {
  Verdict v;
  for (const char* name : {"Z4_F2", "F3eps_F3", "F3xF3_F3"}) {
    const auto rep = six_term_check(extension(name), budgets);
    for (const auto& n : rep.nodes) v.require(n.exact, std::string(name) + " not exact at " + n.at);
    v.require(rep.k1a_kernel_agrees, std::string(name) + ": K1(A) image and kernel disagree");
  }
  const auto split = six_term_check(extension("F3xF3_F3"), budgets);
  v.require(split.k0a_b_injective.value_or(false), "K0(A) -> K0(B) not injective on the split extension");
  return v;
}

Verdict boundary() {
  Verdict v;
  std::mt19937 rng(4);
  std::size_t pairs = 0, calls = 0;
  for (const char* name : {"Z4_F2", "F3eps_F3", "F3xF3_F3"}) {
    const Extension e = extension(name);
    const auto k0a = nonunital_k0(e.A(), e.B->char_exponent(), 2, budgets);
    const auto fib = proj_fibres(e);
    auto random_lift = [&](const RMatrix& g) {
      RMatrix out(e.B, g.n);
      for (std::size_t i = 0; i < g.entries.size(); ++i) {
        const auto& f = fib[g.entries[i]];
        out.entries[i] = f[rng() % f.size()];
      }
      return out;
    };
    const auto units = e.C->units();
    for (int t = 0; t < 100; ++t, ++pairs) {
      const RMatrix g(e.C, 1, {units[rng() % units.size()]});
      const RMatrix gi = inverse_or_throw(g);
      // boundary_class itself throws IdentityFailed if proj(h) != diag(g, g^-1)
      const auto a = boundary_class(e, k0a, g, random_lift(g), random_lift(gi));
      const auto b = boundary_class(e, k0a, g, random_lift(g), random_lift(gi));
      calls += 2;
      v.require(map_matrix(e.proj, a.h) == block_diag(g, gi), std::string(name) + ": proj(h) != diag(g, g^-1)");
      v.require(k0a.k0().is_zero(add_vectors(a.k0a, scale_vector(b.k0a, -1))),
                std::string(name) + ": boundary depends on the lift of " + g.str());
    }
    v.require(boundary_additive_on_units(e, k0a), std::string(name) + ": boundary not additive");
  }
  v.detail = v.pass ? std::to_string(pairs) + " lift pairs, " + std::to_string(calls) + " calls" : v.detail;
  return v;
}

Verdict whitehead() {
  Verdict v;
  std::mt19937 rng(5);
  for (const char* name : {"Z5", "F4"}) absorb(v, name, {whitehead_suite(rings_db().get(name), 2, 100, rng)});
  return v;
}

Verdict cone() {
  Verdict v;
  for (const char* name : {"F2", "Z4"}) absorb(v, name, cone_checks(rings_db().get(name), 64));
  return v;
}

Verdict toeplitz() {
  Verdict v;
  // includes the matrix-unit law for p,q,r,s <= 6 and the Q checks
  for (const char* name : {"F3", "Z4"}) absorb(v, name, toeplitz_checks(rings_db().get(name), 16));
  return v;
}

Verdict homology() {
  Verdict v;
  const auto q = cyclic_homology(algebras::rationals(), 4, budgets);
  v.require(q == std::vector<std::size_t>{1, 0, 1, 0, 1}, "HC(Q) wrong");
  const auto catalog = AlgebraCatalog::load(default_data_dir() / "algebras.json");
  for (const auto& a : catalog.entries()) {
    // b o b = 0 exactly on both complexes, one degree past what is read below
    assert_complex(build_connes_complex(a, 3, budgets));
    assert_complex(build_bar_complex(a, 4, budgets));
    v.require(cyclic_homology(a, 0, budgets)[0] == hc0_oracle(a), a.name + ": HC0 differs from A/[A,A]");
    if (a.unit) {
      const auto hb = bar_homology(a, 3, budgets);
      for (std::size_t n = 0; n <= 3; ++n) v.require(hb[n] == 0, a.name + ": H^bar_" + std::to_string(n) + " != 0");
    }
  }
  v.require(hc0_oracle(catalog.get("M2Q")) == 1, "dim M2Q/[M2Q,M2Q] != 1");
  v.require(cyclic_homology(catalog.get("M2Q"), 0, budgets)[0] == 1, "HC0(M2Q) != 1");
  v.require(bar_homology(catalog.get("SZ1"), 0, budgets)[0] != 0, "H^bar_0 of the square-zero algebra vanishes");
  return v;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  status = ::pclose(p);
  return out;
}

Verdict determinism() {
  Verdict v;
  const std::string base = std::string("'") + KLOW_CLI_PATH + "' verify all --no-cache";
  int s1 = 0, s2 = 0;
  const std::string a = capture(base, s1), b = capture(base, s2);
  v.require(s1 == 0 && s2 == 0, "verify all exited nonzero");
  auto strip = [](const std::string& s) {
    auto j = json::parse(s);
    j.erase("timing");
    return j.dump();
  };
  v.require(!a.empty() && strip(a) == strip(b), "reports differ outside the timing field");
  const std::string c = capture(base + " --no-timing", s1), d = capture(base + " --no-timing", s2);
  v.require(!c.empty() && c == d, "--no-timing reports are not byte-identical");
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "K-group golden table", 300, golden_table},
      {2, "Swan example over F3", 600, swan},
      {3, "six-term exactness", 0, six_term},
      {4, "boundary map properties", 0, boundary},
      {5, "Whitehead factorization", 0, whitehead},
      {6, "cone and sum-ring identities", 0, cone},
      {7, "Toeplitz suite", 0, toeplitz},
      {8, "homology suite", 120, homology},
      {9, "verify all determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) v.require(false, "runtime over " + std::to_string(c.limit_s) + " s");
    failed += v.pass ? 0 : 1;
    char line[64];
    std::snprintf(line, sizeof line, "%.2f s", secs);
    std::cout << "AC" << c.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << c.title << " (" << line << ")";
    if (!v.detail.empty()) std::cout << "  " << v.detail;
    std::cout << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
