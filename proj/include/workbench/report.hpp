#pragma once

// JSON views of the results and the bundle replay pipeline.  Field names are
// stable; objects serialize with sorted keys, so output is deterministic
// apart from the "timings_ms" member.

#include "bundle.hpp"

#include <json.hpp>

#include <chrono>
#include <limits>

namespace workbench {

  using json = nlohmann::json;

  inline constexpr char const* tool_version = "0.1.0";

  inline json as_json(Integer const& x) {
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
      return x.convert_to<long long>();
    }
    return x.str();
  }

  inline json as_json(IntVector const& v) {
    json a = json::array();
    for (auto const& x : v) a.push_back(as_json(x));
    return a;
  }

  inline json as_json(IntMatrix const& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json r = json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(as_json(m(i, j)));
      a.push_back(r);
    }
    return a;
  }

  inline std::string word_text(Presentation const& p, Word const& w) {
    return w.empty() ? "1" : p.to_string(w);
  }

  // Collects wall-clock milliseconds per stage.
  class StageTimer {
   public:
    explicit StageTimer(json& sink) : _sink(sink) {}

    template <typename F>
    auto operator()(std::string const& stage, F&& f) {
      auto const t0 = std::chrono::steady_clock::now();
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto r = f();
        record(stage, t0);
        return r;
      }
    }

   private:
    void record(std::string const& stage, std::chrono::steady_clock::time_point t0) {
      auto const dt = std::chrono::steady_clock::now() - t0;
      _sink[stage] = std::chrono::duration<double, std::milli>(dt).count();
    }
    json& _sink;
  };

  ////////////////////////////////////////////////////////////////////////
  // Rewriting
  ////////////////////////////////////////////////////////////////////////

  inline json rules_json(Presentation const& p, std::vector<Rule> const& rules) {
    json a = json::array();
    for (auto const& r : rules) a.push_back({{"lhs", word_text(p, r.lhs)}, {"rhs", word_text(p, r.rhs)}});
    return a;
  }

  inline json completion_json(Presentation const& p, CompletionResult const& r) {
    if (auto const* rs = std::get_if<RewriteSystem>(&r)) {
      return {{"confluent", true}, {"rule_count", rs->rules().size()},
              {"rules", rules_json(p, rs->rules())}};
    }
    auto const& inc = std::get<Incomplete>(r);
    return {{"confluent", false},
            {"partial_rules", rules_json(p, inc.partial_rules)},
            {"unresolved", {word_text(p, inc.unresolved.first), word_text(p, inc.unresolved.second)}},
            {"reason", inc.reason}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Affine monoids
  ////////////////////////////////////////////////////////////////////////

  inline json monoid_json(AffineMonoid const& b) {
    json g = json::object();
    for (std::size_t i = 0; i < b.size(); ++i) g[b.names()[i]] = as_json(b.generator(i));
    return {{"name", b.name()}, {"ambient_rank", b.ambient_rank()},
            {"group_rank", b.group_rank()}, {"generators", g}};
  }

  inline json membership_json(AffineMonoid const& b, IntVector const& v, MembershipResult const& r) {
    json out = {{"vector", as_json(v)}, {"verdict", to_string(r.verdict)}, {"reason", r.reason}};
    if (r.verdict == Verdict::Member) {
      out["certificate"] = as_json(r.certificate);
      out["expression"]  = b.format(r.certificate);
    }
    return out;
  }

  inline json names_of(AffineMonoid const& b, GenSet s) {
    json a = json::array();
    for (auto i : members_of(s)) a.push_back(b.names()[i]);
    return a;
  }

  inline json primes_json(AffineMonoid const& b, std::vector<FacePrime> const& ps) {
    json a = json::array();
    for (auto const& p : ps) {
      a.push_back({{"label", prime_label(b, p)}, {"generators", names_of(b, p.ideal)},
                   {"face", names_of(b, p.face)}, {"face_rank", p.face_rank}});
    }
    return a;
  }

  inline json normality_json(AffineMonoid const& b, NormalityResult const& n) {
    json hb = json::array();
    for (auto const& c : n.hilbert_basis) hb.push_back(as_json(c));
    json out = {{"status", to_string(n.status)}, {"is_maximal_order", n.normal},
                {"hilbert_basis", hb}, {"reason", n.reason}};
    if (n.witness) out["witness"] = as_json(*n.witness);
    (void)b;
    return out;
  }

  inline json spectrum_json(AffineMonoid const& b, SpectrumPoset const& s) {
    json primes = json::array();
    for (std::size_t i = 0; i < s.primes.size(); ++i) {
      primes.push_back({{"label", prime_label(b, s.primes[i])},
                        {"height", s.height[i]},
                        {"depth", s.depth[i]},
                        {"above", s.above[i]}});
    }
    return {{"dim", s.dim}, {"group_rank", s.group_rank}, {"primes", primes}};
  }

  // Lattice points of the free intersection basis, named when they are
  // generators of b.
  inline json free_basis_json(AffineMonoid const& b) {
    json a = json::array();
    for (auto const& v : free_intersection_basis(b.ambient_rank(), b.group_basis())) {
      json entry = as_json(v);
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.generator(i) == v) entry = b.names()[i];
      }
      a.push_back(entry);
    }
    return a;
  }

  ////////////////////////////////////////////////////////////////////////
  // Groups
  ////////////////////////////////////////////////////////////////////////

  inline json element_json(ExtensionData const& e, GroupElement const& g) {
    return {{"vector", as_json(g.vector)}, {"coset", e.quotient.names[g.coset]}};
  }

  inline json extension_json(ExtensionData const& e) {
    json actions = json::object(), cocycle = json::array();
    for (std::size_t f = 0; f < e.quotient.size(); ++f) {
      actions[e.quotient.names[f]] = as_json(e.action[f]);
      for (std::size_t g = 0; g < e.quotient.size(); ++g) {
        if (!is_zero(e.cocycle[f][g])) {
          cocycle.push_back({{"f", e.quotient.names[f]}, {"g", e.quotient.names[g]},
                             {"value", as_json(e.cocycle[f][g])}});
        }
      }
    }
    json out = {{"rank", e.rank}, {"quotient", e.quotient.names}, {"actions", actions},
                {"cocycle", cocycle}};
    auto const check = validate_extension(e);
    out["valid"]     = check.ok;
    if (!check.ok) out["violation"] = check.violation;
    if (check.ok) {
      if (auto inv = abelian_invariants(e)) {
        out["abelian"]   = true;
        out["structure"] = format_abelian(*inv);
      } else {
        out["abelian"] = false;
      }
    }
    return out;
  }

  inline json group_verdict_json(ExtensionData const& e, GroupVerdict const& v) {
    json out = {{"holds", v.holds}, {"explanation", v.explanation}};
    if (v.witness) out["witness"] = element_json(e, *v.witness);
    if (v.axis) out["axis"] = as_json(*v.axis);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Crossed systems
  ////////////////////////////////////////////////////////////////////////

  inline json crossed_json(CrossedSystem const& cs) {
    json perms = json::object(), products = json::array();
    for (std::size_t i = 0; i < cs.transversal.size(); ++i) {
      json row = json::array();
      for (std::size_t j : cs.permutation[i]) row.push_back(cs.base.names()[j]);
      perms[cs.labels[i]] = row;
      json prow = json::array();
      for (auto const& f : cs.product[i]) {
        prow.push_back({{"b", as_json(f.b)}, {"w", cs.labels[f.k]}});
      }
      products.push_back(prow);
    }
    return {{"base", monoid_json(cs.base)},
            {"transversal", cs.labels},
            {"check_len", cs.check_len},
            {"covered_normal_forms", cs.covered},
            {"generator_permutations", perms},
            {"products", products}};
  }

  inline json rep_json(Presentation const& p, RepCheck const& r) {
    json out = {{"status", to_string(r.kind)}, {"ok", r.ok()},
                {"scanned", r.scanned}, {"scan_len", r.scan_len}};
    if (!r.ok()) {
      out["detail"] = r.detail;
      if (r.kind != RepCheck::Kind::MissingGenerator) {
        out["words"] = {word_text(p, r.words.first), word_text(p, r.words.second)};
      }
    }
    return out;
  }

  inline json cosets_json(CrossedSystem const& cs, CosetStructure const& co) {
    json classes = json::array();
    for (std::size_t i = 0; i < cs.transversal.size(); ++i) {
      classes.push_back({{"w", cs.labels[i]},
                         {"class", co.extension.quotient.names[co.class_of[i]]},
                         {"offset", as_json(co.offset[i])}});
    }
    json reps = json::array();
    for (auto r : co.representative) reps.push_back(cs.labels[r]);
    return {{"classes", classes}, {"representatives", reps},
            {"extension", extension_json(co.extension)}};
  }

  inline json orbits_json(CrossedSystem const& cs, OrbitDecomposition const& od) {
    json primes = json::array();
    for (auto const& p : od.primes) primes.push_back(prime_label(cs.base, p));
    json orbits = json::array();
    for (auto const& o : od.orbits) {
      json ps = json::array(), tr = json::array();
      for (auto i : o.primes) ps.push_back(prime_label(cs.base, od.primes[i]));
      for (auto const& g : o.trace) tr.push_back(g.label);
      orbits.push_back({{"primes", ps}, {"trace", tr}});
    }
    json perms = json::object();
    for (std::size_t i = 0; i < od.prime_permutation.size(); ++i) {
      json row = json::array();
      for (auto j : od.prime_permutation[i]) row.push_back(prime_label(cs.base, od.primes[j]));
      perms[cs.labels[i]] = row;
    }
    return {{"minimal_primes_of_base", primes}, {"orbits", orbits}, {"prime_permutations", perms}};
  }

  inline json transfer_json(CrossedSystem const& cs, OrbitDecomposition const& od,
                            TransferReport const& t) {
    json certs = json::array();
    for (auto const& c : t.certificates) {
      json e = {{"source", prime_label(cs.base, od.primes[c.source])},
                {"target", prime_label(cs.base, od.primes[c.target])},
                {"found", c.found}};
      if (c.found) {
        e["w"]       = cs.labels[c.transversal];
        e["b"]       = as_json(c.b);
        e["k"]       = cs.labels[c.k];
        e["product"] = as_json(c.product);
      }
      certs.push_back(e);
    }
    return {{"status", to_string(t.status)}, {"certificates", certs}};
  }

  inline json separation_json(SeparationReport const& s) {
    json powers = json::object();
    for (auto const& [x, m] : s.powers) powers[x] = m ? json(*m) : json(nullptr);
    json out = {{"status", to_string(s.status)},
                {"candidates", s.candidate_labels},
                {"instances", s.instances},
                {"powers", powers},
                {"power_bound", s.power_bound},
                {"vacuous", s.vacuous}};
    out["central"] = s.central ? json(s.candidate_labels[*s.central]) : json(nullptr);
    if (!s.failure.empty()) out["failure"] = s.failure;
    return out;
  }

  inline json minimal_json(MinimalPrimeReport const& m) {
    json primes = json::array();
    for (auto const& p : m.primes) {
      json tr = json::array();
      for (auto const& g : p.trace) tr.push_back(g.label);
      primes.push_back({{"orbit", p.orbit}, {"trace", tr}});
    }
    return {{"status", to_string(m.status)}, {"primes", primes}, {"reason", m.reason},
            {"invariance", to_string(invariance_condition(m))}};
  }

  inline json escape_json(Escape const& e) {
    json out = {{"found", e.found}, {"explored", e.explored}, {"inconclusive", e.inconclusive}};
    if (e.found) {
      out["path"]    = e.path;
      out["element"] = as_json(e.element);
    }
    return out;
  }

  inline json maximality_json(CrossedSystem const& cs, MaximalityReport const& m) {
    json failures = json::array();
    for (auto const& f : m.failures) {
      failures.push_back({{"x", as_json(f.x)}, {"w", cs.labels[f.transversal]},
                          {"search", escape_json(f.escape)}});
    }
    json named = json::array();
    for (auto const& n : m.named) {
      json e = {{"name", n.name}, {"in_S", n.in_S}};
      if (!n.in_S) e["escape"] = escape_json(n.escape);
      if (n.declared_escapes) e["declared_escapes"] = *n.declared_escapes;
      if (n.declared_element) e["declared_element"] = as_json(*n.declared_element);
      named.push_back(e);
    }
    return {{"status", to_string(m.status)}, {"radius", m.radius}, {"box", m.box},
            {"candidates", m.candidates}, {"skipped", m.skipped}, {"absorbed", m.absorbed},
            {"failures", failures}, {"named_witnesses", named}};
  }

  inline json dimension_json(DimensionReport const& d) {
    json out = {{"dim_S", d.dim_S}, {"unit_rank", d.unit_rank}};
    out["clKdim"] = d.clkdim ? json(*d.clkdim) : json("dim_S + pl(U(S)) [pl not computed]");
    return out;
  }

  inline json theorem33_json(CrossedSystem const& cs, Theorem33Report const& r) {
    json conds = json::array();
    for (auto const& c : r.conditions) {
      conds.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    }
    auto const& e = r.cosets.extension;
    return {{"conditions", conds},
            {"overall", to_string(r.overall)},
            {"verdict", r.verdict},
            {"base_normality", normality_json(cs.base, r.normality)},
            {"cosets", cosets_json(cs, r.cosets)},
            {"delta_plus", group_verdict_json(e, r.delta_plus)},
            {"dihedral_free", group_verdict_json(e, r.dihedral)},
            {"orbits", orbits_json(cs, r.orbits)},
            {"transfer", transfer_json(cs, r.orbits, r.transfer)},
            {"separation", separation_json(r.separation)},
            {"minimal_primes", minimal_json(r.minimal)},
            {"maximality", maximality_json(cs, r.maximality)},
            {"dimension", dimension_json(r.dimension)}};
  }

  inline json embedding_json(Presentation const& p, EmbeddingCheck const& e) {
    json out = {{"target", e.target}, {"relations_hold", e.relations_hold},
                {"injective_up_to_scan_len", e.injective}, {"scanned", e.scanned},
                {"scan_len", e.scan_len}};
    if (e.failing_relation) out["failing_relation"] = *e.failing_relation;
    if (e.relations_hold && !e.injective) {
      out["collision"] = {word_text(p, e.collision.first), word_text(p, e.collision.second)};
    }
    return out;
  }

  inline json bounds_json(Bounds const& b) {
    return {{"max_rules", b.max_rules}, {"max_len", b.max_len}, {"check_len", b.check_len},
            {"scan_len", b.scan_len}, {"radius", b.radius}, {"box", b.box}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Replay
  ////////////////////////////////////////////////////////////////////////

  struct ReplayOutcome {
    json   result;
    Status status = Status::Unknown;  // of the mathematical content
  };

  // Runs everything a bundle supports.  Status: the theorem33 verdict when a
  // crossed system is present, otherwise base normality.
  inline ReplayOutcome replay_bundle(Bundle const& b, Bounds const& bounds, json& timings) {
    StageTimer    time(timings);
    ReplayOutcome out;
    json&         r = out.result;
    r["bundle"]     = b.name;
    r["bounds"]     = bounds_json(bounds);

    if (b.base.monoid.size() > 0) {
      auto const& m = b.base.monoid;
      json        a = {{"monoid", monoid_json(m)}};
      auto const  n = time("affine.normality", [&] { return is_maximal_order(m); });
      a["normality"]               = normality_json(m, n);
      a["is_maximal_order"]        = n.normal;
      a["free_intersection_basis"] = time("affine.free_basis", [&] { return free_basis_json(m); });
      auto const mp                = time("affine.minimal_primes", [&] { return minimal_primes(m); });
      a["minimal_primes"]          = primes_json(m, mp);
      a["minimal_prime_count"]     = mp.size();
      auto const sp                = time("affine.spectrum", [&] { return spectrum(m); });
      a["spectrum"]                = spectrum_json(m, sp);
      auto const units             = unit_group(m);
      json       ub                = json::array();
      for (auto const& u : units.basis) ub.push_back(as_json(u));
      a["unit_group"] = {{"status", to_string(units.status)}, {"basis", ub}};
      r["affine"]     = a;
      out.status      = n.status == Verdict::Member      ? Status::Verified
                        : n.status == Verdict::NotMember ? Status::Refuted
                                                         : Status::Unknown;
    }

    if (!b.has_presentation) return out;
    auto const comp = time("complete", [&] {
      return complete(b.presentation, bounds.max_rules, bounds.max_len);
    });
    r["completion"] = completion_json(b.presentation, comp);
    if (!std::holds_alternative<RewriteSystem>(comp)) {
      out.status = Status::Unknown;
      return out;
    }
    auto const& rs = std::get<RewriteSystem>(comp);
    r["enumeration"] = {{"max_len", bounds.check_len},
                        {"counts", enumerate_elements(rs, bounds.check_len).counts}};

    if (b.rep) {
      auto const rc = time("rep_verify", [&] {
        return verify_monomial_rep(b.presentation, rs, *b.rep, bounds.scan_len);
      });
      r["monomial_rep"] = rep_json(b.presentation, rc);
    }
    if (b.extension) r["declared_extension"] = extension_json(*b.extension);
    if (b.extension && validate_extension(*b.extension).ok) {
      r["declared_extension"]["delta_plus"] =
          group_verdict_json(*b.extension, delta_plus_trivial(*b.extension));
      r["declared_extension"]["dihedral_free"] =
          group_verdict_json(*b.extension, dihedral_free(*b.extension));
    }
    if (b.embedding) {
      auto const ec = time("embedding", [&] { return check_embedding(b, rs, bounds); });
      r["embedding"] = embedding_json(b.presentation, ec);
    }

    if (b.transversal.empty()) return out;
    auto const cs = time("crossed.extract", [&] { return crossed_system_of(b, rs, bounds); });
    r["crossed"]  = crossed_json(cs);
    auto const assoc = check_associativity(cs);
    r["crossed"]["associative"] = !assoc.has_value();
    auto const named = parse_witnesses(b, cs);
    auto const t33   = time("theorem33", [&] {
      return theorem33_report(cs, bounds.radius, bounds.box, named);
    });
    r["theorem33"] = theorem33_json(cs, t33);
    out.status     = t33.overall;
    return out;
  }

  // RFC 6902 patch turning expected into actual, each entry annotated with
  // the expected value it replaces; empty when they agree.
  inline json replay_diff(json const& expected, json const& actual) {
    json d = json::diff(expected, actual);
    for (auto& op : d) {
      json::json_pointer const ptr(op["path"].get<std::string>());
      if (op["op"] != "add" && expected.contains(ptr)) op["expected"] = expected.at(ptr);
    }
    return d;
  }

}  // namespace workbench
