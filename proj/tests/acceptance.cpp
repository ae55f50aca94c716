#include "workbench/report.hpp"

#include "face_oracle.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sys/wait.h>

using namespace workbench;
namespace fs = std::filesystem;

namespace {

  struct Outcome {
    bool        pass = false;
    std::string detail;
  };

  struct Criterion {
    int                      id;
    std::string              name;
    double                   limit_s;
    std::function<Outcome()> check;
  };

  fs::path example(std::string const& name) {
    return fs::path(WORKBENCH_EXAMPLES_DIR) / name;
  }

  struct Cli {
    int  code = -1;
    json report;
  };

  Cli cli(std::vector<std::string> const& args) {
    std::string cmd = std::string("'") + WORKBENCH_CLI + "'";
    for (auto const& a : args) cmd += " '" + a + "'";
    cmd += " 2>/dev/null";
    std::string out;
    FILE*       p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("cannot run " + cmd);
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int const status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, json::parse(out)};
  }

  struct Loaded {
    Bundle        bundle;
    RewriteSystem rs;
    CrossedSystem cs;
  };

  Loaded load(std::string const& name) {
    Loaded l;
    l.bundle = load_bundle(example(name));
    l.rs     = complete_or_throw(l.bundle.presentation, {});
    l.cs     = crossed_system_of(l.bundle, l.rs, {});
    return l;
  }

  Word digits(std::string const& s) {
    Word w;
    for (char c : s) w.push_back(static_cast<Letter>(c - '1'));
    return w;
  }

  Outcome rewriting() {
    auto const p = load_bundle(example("example4-main")).presentation;
    auto const r = complete(p, 200, 12);
    if (!std::holds_alternative<RewriteSystem>(r)) return {false, "completion incomplete"};
    auto const& rs = std::get<RewriteSystem>(r);
    std::vector<std::string> const classes{
        "112=134=244",     "113=124=344",     "114=123=343=321=411", "221=243=133",
        "224=213=433",     "223=214=434=412=322", "331=342=122",     "334=312=422",
        "332=341=121=143=233", "442=431=211", "443=421=311",         "441=432=212=234=144",
        "131=142=232=241", "141=132=242=231", "313=423=414=324",     "323=314=424=413"};
    std::set<Word> reps;
    for (auto const& cls : classes) {
      std::istringstream in(cls);
      std::string        w;
      std::set<Word>     nfs;
      while (std::getline(in, w, '=')) nfs.insert(normal_form(rs, digits(w)));
      if (nfs.size() != 1) return {false, "class " + cls + " splits"};
      reps.insert(*nfs.begin());
    }
    if (reps.size() != classes.size()) return {false, "two classes merge"};
    return {true, std::to_string(rs.rules().size()) + " rules, " + std::to_string(classes.size())
                      + " classes with distinct normal forms"};
  }

  Outcome abelian_maximal_order() {
    auto const b  = parse_affine(oracle::bundle("example2-abelian", "base.txt")).monoid;
    auto const mo = is_maximal_order(b);
    if (mo.status != Verdict::Member || !mo.normal) return {false, "not a maximal order"};
    auto       h = free_intersection_basis(b.ambient_rank(), b.generators());
    auto       g = b.generators();
    std::sort(g.begin(), g.end());
    if (h != g) return {false, "free intersection basis differs from {b1..b6}"};
    std::set<GenSet> got;
    for (auto const& q : minimal_primes(b)) got.insert(q.ideal);
    auto const triple = [&](std::vector<std::string> const& names) {
      GenSet s = 0;
      for (auto const& n : names) s |= GenSet(1) << *b.index(n);
      return s;
    };
    std::set<GenSet> const want{
        triple({"b1", "b3", "b5"}), triple({"b2", "b3", "b6"}), triple({"b2", "b4", "b5"}),
        triple({"b1", "b4", "b6"}), triple({"b2", "b3", "b5"}), triple({"b1", "b3", "b6"}),
        triple({"b1", "b4", "b5"}), triple({"b2", "b4", "b6"})};
    if (got != want) return {false, std::to_string(got.size()) + " minimal primes, wrong triples"};
    return {true, "maximal order, basis {b1..b6}, 8 minimal primes"};
  }

  // a1^x1 a3^x3 a4^x4 a6^x6 in the coordinates of the base.
  IntVector alpha(AffineMonoid const& b, int x1, int x3, int x4, int x6) {
    return Integer(x1) * b.generator(*b.index("a1")) + Integer(x3) * b.generator(*b.index("a3"))
           + Integer(x4) * b.generator(*b.index("a4")) + Integer(x6) * b.generator(*b.index("a6"));
  }

  bool claim(int a1, int a3, int a4, int a6) {
    if (a3 < 0 || a4 < 0) return false;
    if (a1 >= 0) return std::min(a3, a4) + a6 >= 0;
    return a3 + a1 >= 0 && a4 + a1 >= 0 && std::min(a3, a4) + a1 + a6 >= 0;
  }

  Outcome membership() {
    auto const b    = parse_affine(oracle::bundle("example4-main", "base.txt")).monoid;
    auto const sums = oracle::bounded_sums(b.generators(), b.ambient_rank(), 12);
    int        n = 0, members = 0;
    for (int a1 = -3; a1 <= 3; ++a1)
      for (int a3 = -3; a3 <= 3; ++a3)
        for (int a4 = -3; a4 <= 3; ++a4)
          for (int a6 = -3; a6 <= 3; ++a6) {
            IntVector const v = alpha(b, a1, a3, a4, a6);
            auto const      m = member(b, v);
            std::ostringstream at;
            at << "(" << a1 << "," << a3 << "," << a4 << "," << a6 << ")";
            if (m.verdict == Verdict::Unknown) return {false, "unknown at " + at.str()};
            if (m.member() != claim(a1, a3, a4, a6)) return {false, "claim differs at " + at.str()};
            if (m.member() != (sums.count(v) > 0)) return {false, "brute force differs at " + at.str()};
            ++n;
            members += m.member();
          }
    return {true, std::to_string(n) + " vectors, " + std::to_string(members) + " members"};
  }

  Outcome representation() {
    auto const l = load("example4-main");
    if (!l.bundle.rep) return {false, "no rep.txt"};
    auto const r = verify_monomial_rep(l.cs.presentation, l.rs, *l.bundle.rep, 6);
    if (!r.ok()) return {false, "verification failed"};
    return {true, std::to_string(l.cs.presentation.relations().size()) + " relations hold, "
                      + std::to_string(r.scanned) + " normal forms, no collisions"};
  }

  Outcome group_invariants() {
    auto const l  = load("example4-main");
    auto const e  = group_extension_of(l.cs).extension;
    bool const dp = delta_plus_trivial(e).holds, df = dihedral_free(e).holds;
    auto const n  = load_bundle(example("nonprime-quotient"));
    if (!n.extension) return {false, "nonprime-quotient has no extension"};
    bool const ndp = delta_plus_trivial(*n.extension).holds;
    std::string const d = "main: delta_plus " + std::string(dp ? "trivial" : "nontrivial")
                          + ", dihedral free " + (df ? "yes" : "no") + "; Z x Z2: delta_plus "
                          + (ndp ? "trivial" : "nontrivial");
    return {dp && df && !ndp, d};
  }

  Outcome orbits_and_traces() {
    auto const l  = load("example4-main");
    auto const co = group_extension_of(l.cs);
    auto const od = prime_action_orbits(l.cs);
    if (od.orbits.size() != 2) return {false, std::to_string(od.orbits.size()) + " orbits"};
    std::set<std::set<std::string>> traces;
    for (auto const& o : od.orbits) {
      if (o.primes.size() != 4) return {false, "orbit of size " + std::to_string(o.primes.size())};
      std::set<std::string> t;
      for (auto const& g : o.trace) t.insert(g.label);
      traces.insert(t);
    }
    std::set<std::string> const M  = {"a1 a2", "a1 a3 a5", "a2 a3 a6", "a2 a4 a5", "a1 a4 a6"};
    std::set<std::string> const M2 = {"a1 a2", "a1 a3 a6", "a1 a4 a5", "a2 a3 a5", "a2 a4 a6"};
    if (traces != std::set<std::set<std::string>>{M, M2}) return {false, "traces differ from M, M'"};
    auto const sp = separation_certificates(l.cs, co, od);
    if (sp.status != Status::Verified || !sp.central) return {false, "separation not verified"};
    if (sp.candidate_labels[*sp.central] != "a1 a2") return {false, "central element is not a1 a2"};
    return {true, "2 orbits of 4, traces M and M', " + std::to_string(sp.instances)
                      + " separation instances verified"};
  }

  Outcome structure_report() {
    auto const r = cli({"report", "theorem33", example("example4-main").string(), "--radius", "4",
                        "--box", "2"});
    auto const& res = r.report["result"];
    for (auto const& c : res["conditions"]) {
      if (c["status"] != "Verified") return {false, c["name"].get<std::string>() + " not Verified"};
    }
    auto const& m = res["maximality"];
    if (m["status"] != "VerifiedUpToBounds") return {false, "maximality not verified"};
    std::set<std::string> escaped;
    for (auto const& w : m["named_witnesses"]) {
      if (w["in_S"] == false && w["declared_escapes"] == true && w["escape"]["found"] == true)
        escaped.insert(w["name"].get<std::string>());
    }
    if (!escaped.count("case1") || !escaped.count("case3")) return {false, "case escapes missing"};
    if (res["verdict"] != "prime Noetherian maximal order" || r.code != 0)
      return {false, "verdict " + res["verdict"].dump()};
    return {true, "6 conditions Verified, " + std::to_string(m["candidates"].get<long>())
                      + " maximality candidates, case1 and case3 escape"};
  }

  Outcome itype() {
    std::string detail;
    for (auto const* name : {"itype-2gen", "itype-3gen"}) {
      auto const r = cli({"report", "theorem33", example(name).string()});
      auto const v = r.report["result"]["verdict"].get<std::string>();
      if (r.code != 0 || v != "prime Noetherian maximal order") return {false, name + (": " + v)};
      detail += std::string(detail.empty() ? "" : ", ") + name + " Verified";
    }
    return {true, detail};
  }

  Outcome properties() {
    auto const& corpus = oracle::instances();
    std::size_t primes = 0, probes = 0;
    std::mt19937 rng(99);
    for (auto const& in : corpus) {
      auto const& b = in.monoid;
      auto const  o = oracle::face_oracle(b.generators());
      for (std::size_t k = 0; k < o.faces.size(); ++k) {
        if (o.rank[k] + o.height[k] != b.group_rank()) return {false, "Schelter identity fails"};
        ++primes;
      }
      auto const s = spectrum(b);
      if (s.dim != b.group_rank() || s.primes.size() + 1 != o.faces.size())
        return {false, "spectrum differs from the face oracle"};
      for (std::size_t i = 0; i < s.primes.size(); ++i)
        if (s.depth[i] + s.height[i] != s.dim) return {false, "spectrum heights fail the identity"};

      GenSet const     all = b.all_generators();
      std::set<GenSet> want, got;
      for (auto f : o.faces) {
        if (f == all) continue;
        bool maximal = true;
        for (auto g : o.faces)
          if (g != all && g != f && (g & f) == f) maximal = false;
        if (maximal) want.insert(f);
      }
      for (auto const& q : minimal_primes(b)) got.insert(q.face);
      if (got != want) return {false, "minimal primes differ from the subset oracle"};

      if (!unit_group(b).basis.empty()) return {false, "pointed monoid with units"};
      std::map<IntVector, bool> memo;
      for (auto const& v : oracle::bounded_sums(in.positive, in.positive.front().size(), 3)) {
        IntVector w = v;
        w[0] -= 1;
        for (auto const& probe : {v, w}) {
          auto const r = member(b, in.change * probe);
          if (r.member() != oracle::reachable(in.positive, probe, memo))
            return {false, "membership differs from the search oracle"};
          if (r.member()) {
            IntVector sum = zero_vector(b.ambient_rank());
            for (std::size_t i = 0; i < b.size(); ++i) sum += r.certificate[i] * b.generator(i);
            if (sum != in.change * probe) return {false, "certificate does not resum"};
          }
          ++probes;
        }
      }

      IntMatrix const        u = oracle::random_unimodular(rng, b.ambient_rank());
      std::vector<IntVector> h;
      for (auto const& g : b.generators()) h.push_back(u * g);
      AffineMonoid const c(b.ambient_rank(), b.names(), h);
      std::set<GenSet>   pb, pc;
      for (auto const& q : minimal_primes(b)) pb.insert(q.ideal);
      for (auto const& q : minimal_primes(c)) pc.insert(q.ideal);
      if (pb != pc || is_maximal_order(b).status != is_maximal_order(c).status
          || spectrum(c).height != s.height)
        return {false, "verdicts change under a change of basis"};
    }

    // Unit groups: negated copies of generators are units.
    std::uniform_int_distribution<int> rank_d(1, 4), entry(-2, 2);
    for (int t = 0; t < 100; ++t) {
      std::size_t const      d = rank_d(rng);
      std::vector<IntVector> g;
      for (int i = 0; i < 3; ++i) {
        IntVector v(d);
        for (auto& x : v) x = entry(rng);
        if (is_zero(v)) v[0] = 1;
        g.push_back(v);
      }
      g.push_back(-g[1]);
      AffineMonoid const b(d, {"u0", "u1", "u2", "u3"}, g);
      GenSet             smallest = b.all_generators();
      for (GenSet f = 0; f <= b.all_generators(); ++f)
        if (oracle::is_face(g, f) && __builtin_popcountll(f) < __builtin_popcountll(smallest))
          smallest = f;
      std::vector<IntVector> uv;
      for (auto i : members_of(smallest)) uv.push_back(g[i]);
      auto const u = unit_group(b);
      if (u.basis.size() != oracle::rank_q(uv)) return {false, "unit rank differs"};
      for (auto const& x : u.basis)
        if (!member(b, x).member() || !member(b, -x).member()) return {false, "unit basis not units"};
    }
    return {corpus.size() >= 100,
            std::to_string(corpus.size()) + " monoids, " + std::to_string(primes) + " primes, "
                + std::to_string(probes) + " membership probes, 100 unit groups"};
  }

  Outcome negative_control() {
    auto const r   = cli({"replay", "nonprime-quotient"});
    auto const& rp = r.report["result"]["replay"];
    auto const& e  = rp["declared_extension"];
    if (r.code != 0 || r.report["result"]["matches"] != true) return {false, "replay mismatch"};
    if (e["structure"] != "Z x Z2") return {false, "structure " + e["structure"].dump()};
    if (e["delta_plus"]["holds"] != false) return {false, "delta_plus trivial"};
    if (rp["embedding"]["relations_hold"] != true || rp["embedding"]["injective_up_to_scan_len"] != true)
      return {false, "embedding not verified"};
    if (rp["theorem33"]["verdict"] != "not a prime Noetherian maximal order")
      return {false, "verdict " + rp["theorem33"]["verdict"].dump()};
    return {true, "H = Z x Z2, delta_plus nontrivial, not prime"};
  }

}  // namespace

int main() {
  std::vector<Criterion> const criteria{
      {1, "rewriting fidelity", 1, rewriting},
      {2, "abelian maximal order", 10, abelian_maximal_order},
      {3, "membership oracle equivalence", 30, membership},
      {4, "representation and cancellativity", 60, representation},
      {5, "group invariants", 1, group_invariants},
      {6, "orbits and traces", 10, orbits_and_traces},
      {7, "structure report", 300, structure_report},
      {8, "I-type verdicts", 600, itype},
      {9, "property suites", 600, properties},
      {10, "negative control", 1, negative_control},
  };
  int failed = 0;
  for (auto const& c : criteria) {
    auto const start = std::chrono::steady_clock::now();
    Outcome    o;
    try {
      o = c.check();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double const s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && s > c.limit_s) {
      o.pass = false;
      o.detail += ", over the time limit";
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), s);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
