#pragma once

// Affine monoids B = <g_1, ..., g_n> in Z^r: membership, units, faces and
// primes, the spectrum poset, normality and Hilbert bases.
//
// Everything is computed in coordinates of a basis of gr(B), where the cone
// of B is full dimensional.  Facets come from (d-1)-subsets of generators,
// which is adequate for the handful of generators used here.
//
// File format:
//
//   affine B rank 8
//   gen b1: 1 1 1 1 0 0 0 0
//   word b1: x1 x4          # optional, used by crossed systems

#include "lattice.hpp"
#include "presentation.hpp"
#include "simplex.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>

namespace workbench {

  using GenSet = std::uint64_t;  // bit i = generator i

  inline std::vector<std::size_t> members_of(GenSet s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 64; ++i) {
      if (s >> i & 1) out.push_back(i);
    }
    return out;
  }

  enum class Verdict { Member, NotMember, Unknown };

  inline char const* to_string(Verdict v) {
    switch (v) {
      case Verdict::Member: return "member";
      case Verdict::NotMember: return "not_member";
      default: return "unknown";
    }
  }

  struct MembershipResult {
    Verdict   verdict = Verdict::Unknown;
    IntVector certificate;  // lambda, one entry per generator
    std::string reason;

    bool member() const noexcept {
      return verdict == Verdict::Member;
    }
  };

  class AffineMonoid {
   public:
    AffineMonoid() = default;

    AffineMonoid(std::size_t              ambient_rank,
                 std::vector<std::string> names,
                 std::vector<IntVector>   gens,
                 std::string              name = "B")
        : _name(std::move(name)),
          _rank(ambient_rank),
          _names(std::move(names)),
          _gens(std::move(gens)) {
      if (_gens.empty()) {
        throw std::invalid_argument("affine monoid needs at least one generator");
      }
      if (_gens.size() > 64) {
        throw std::invalid_argument("affine monoid: at most 64 generators supported");
      }
      if (_names.size() != _gens.size()) {
        throw std::invalid_argument("affine monoid: names and generators differ in number");
      }
      std::set<std::string> seen;
      for (std::size_t i = 0; i < _gens.size(); ++i) {
        if (_gens[i].size() != _rank) {
          throw std::invalid_argument("generator " + _names[i] + " has wrong length");
        }
        if (_names[i].empty() || !seen.insert(_names[i]).second) {
          throw std::invalid_argument("generator names must be unique and nonempty");
        }
      }
      analyse();
    }

    std::string const& name() const noexcept {
      return _name;
    }
    std::size_t ambient_rank() const noexcept {
      return _rank;
    }
    std::size_t size() const noexcept {
      return _gens.size();
    }
    std::vector<std::string> const& names() const noexcept {
      return _names;
    }
    std::vector<IntVector> const& generators() const noexcept {
      return _gens;
    }
    IntVector const& generator(std::size_t i) const {
      return _gens[i];
    }
    std::optional<std::size_t> index(std::string const& n) const {
      for (std::size_t i = 0; i < _names.size(); ++i) {
        if (_names[i] == n) return i;
      }
      return std::nullopt;
    }

    // Basis of gr(B) inside Z^r and the coordinate map onto it.
    std::vector<IntVector> const& group_basis() const noexcept {
      return _basis;
    }
    std::size_t group_rank() const noexcept {
      return _basis.size();
    }
    std::optional<IntVector> coordinates(IntVector const& v) const {
      if (v.size() != _rank) {
        throw std::invalid_argument("vector has wrong ambient rank");
      }
      IntVector const ub = _smith.left * v;
      IntVector       y  = zero_vector(_basis.size());
      for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < _basis.size()) {
          if (ub[i] % _smith.invariant(i) != 0) return std::nullopt;
          y[i] = ub[i] / _smith.invariant(i);
        } else if (ub[i] != 0) {
          return std::nullopt;
        }
      }
      return _smith.right * y;
    }
    IntVector from_coordinates(IntVector const& c) const {
      return workbench::from_coordinates(_basis, c, _rank);
    }
    std::vector<IntVector> const& generator_coordinates() const noexcept {
      return _coords;
    }

    // Facet normals in gr(B) coordinates, each primitive, >= 0 on B, and the
    // generators on each facet.
    std::vector<IntVector> const& facets() const noexcept {
      return _facets;
    }
    std::vector<GenSet> const& facet_generators() const noexcept {
      return _facet_sets;
    }
    // Sum of facet normals: zero exactly on the units of the cone.
    IntVector const& grading() const noexcept {
      return _grading;
    }
    GenSet unit_generators() const noexcept {
      return _unit_set;
    }
    GenSet all_generators() const noexcept {
      return _gens.size() == 64 ? ~GenSet(0) : (GenSet(1) << _gens.size()) - 1;
    }

    // Integer y >= 1 with sum over unit generators y_i g_i = 0.
    IntVector const& unit_relation() const noexcept {
      return _unit_relation;
    }
    std::vector<IntVector> const& unit_lattice_coordinates() const noexcept {
      return _unit_lattice;
    }

    bool in_cone_coordinates(IntVector const& c) const {
      for (auto const& f : _facets) {
        if (dot(f, c) < 0) return false;
      }
      return true;
    }

    std::string format(IntVector const& lambda) const {
      std::string s;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] == 0) continue;
        if (!s.empty()) s += ' ';
        s += _names[i];
        if (lambda[i] != 1) s += "^" + lambda[i].str();
      }
      return s.empty() ? "1" : s;
    }

   private:
    void analyse();

    std::string              _name;
    std::size_t              _rank = 0;
    std::vector<std::string> _names;
    std::vector<IntVector>   _gens;

    std::vector<IntVector> _basis;
    SmithForm              _smith;
    std::vector<IntVector> _coords;
    std::vector<IntVector> _facets;
    std::vector<GenSet>    _facet_sets;
    IntVector              _grading;
    GenSet                 _unit_set = 0;
    IntVector              _unit_relation;
    std::vector<IntVector> _unit_lattice;
  };

  namespace detail {
    inline void for_each_subset(std::size_t                                         n,
                                std::size_t                                         k,
                                std::function<void(std::vector<std::size_t> const&)> f) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      if (k > n) return;
      while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }

    struct FacetData {
      std::vector<IntVector> normals;
      std::vector<GenSet>    on;
    };

    // Facets of the cone spanned by full-dimensional vectors in Z^d.
    inline FacetData facets_of(std::vector<IntVector> const& v, std::size_t d) {
      FacetData                                out;
      std::map<IntVector, GenSet>              found;
      if (d == 0) return out;
      for_each_subset(v.size(), d - 1, [&](std::vector<std::size_t> const& idx) {
        std::vector<IntVector> rows;
        for (auto i : idx) rows.push_back(v[i]);
        IntMatrix const m = IntMatrix::from_rows(rows, d);
        if (rank(m) != d - 1) return;
        auto ker = kernel_basis(m);
        if (ker.size() != 1) return;
        IntVector f   = primitive(ker[0]);
        bool      pos = false, neg = false;
        for (auto const& x : v) {
          Integer const s = dot(f, x);
          pos             = pos || s > 0;
          neg             = neg || s < 0;
        }
        if (pos && neg) return;
        if (!pos && !neg) return;  // cannot happen for full-dimensional input
        if (neg) f = -f;
        GenSet on = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (dot(f, v[i]) == 0) on |= GenSet(1) << i;
        }
        found.emplace(f, on);
      });
      std::vector<std::pair<GenSet, IntVector>> sorted;
      for (auto& [f, on] : found) sorted.emplace_back(on, f);
      std::sort(sorted.begin(), sorted.end());
      for (auto& [on, f] : sorted) {
        out.normals.push_back(f);
        out.on.push_back(on);
      }
      return out;
    }
  }  // namespace detail

  inline void AffineMonoid::analyse() {
    _basis = lattice_basis(_gens, _rank);
    _smith = smith_form(IntMatrix::from_columns(_basis, _rank));
    std::size_t const d = _basis.size();
    for (auto const& g : _gens) {
      auto c = coordinates(g);
      _coords.push_back(*c);
    }
    auto fd     = detail::facets_of(_coords, d);
    _facets     = std::move(fd.normals);
    _facet_sets = std::move(fd.on);
    _grading    = zero_vector(d);
    for (auto const& f : _facets) _grading += f;
    std::vector<IntVector> units;
    for (std::size_t i = 0; i < _gens.size(); ++i) {
      if (dot(_grading, _coords[i]) == 0) {
        _unit_set |= GenSet(1) << i;
        units.push_back(_coords[i]);
      }
    }
    _unit_lattice = lattice_basis(units, d);
    if (!units.empty()) {
      auto rel = positive_relation(units, d);
      if (!rel) {
        throw std::logic_error("unit generators admit no positive relation");
      }
      _unit_relation = std::move(*rel);
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Membership
  ////////////////////////////////////////////////////////////////////////

  // Exhaustive search for lambda >= 0 with sum lambda_i g_i = v.  The grading
  // turns the search into a bounded knapsack; each partial sum is pruned by
  // the facet inequalities.  Exceeding node_limit yields Unknown.
  inline MembershipResult member(AffineMonoid const& b,
                                 IntVector const&    v,
                                 std::size_t         node_limit = 2000000) {
    MembershipResult res;
    auto             x = b.coordinates(v);
    if (!x) {
      res.verdict = Verdict::NotMember;
      res.reason  = "not in gr(B)";
      return res;
    }
    for (std::size_t k = 0; k < b.facets().size(); ++k) {
      if (dot(b.facets()[k], *x) < 0) {
        res.verdict = Verdict::NotMember;
        res.reason  = "violates facet " + std::to_string(k);
        return res;
      }
    }

    auto const&              c    = b.generator_coordinates();
    IntVector const&         grad = b.grading();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!(b.unit_generators() >> i & 1)) order.push_back(i);
    }
    std::vector<Integer> ell(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) ell[i] = dot(grad, c[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return ell[i] > ell[j];
    });
    // zero_after[k][f]: generators order[k..] all vanish on facet f.
    std::size_t const              nf = b.facets().size();
    std::vector<std::vector<bool>> zero_after(order.size() + 1, std::vector<bool>(nf, true));
    for (std::size_t k = order.size(); k-- > 0;) {
      for (std::size_t f = 0; f < nf; ++f) {
        zero_after[k][f] = zero_after[k + 1][f] && dot(b.facets()[f], c[order[k]]) == 0;
      }
    }

    std::vector<IntVector> const& ulat = b.unit_lattice_coordinates();
    std::vector<std::size_t>      units = members_of(b.unit_generators());
    IntVector                     lambda = zero_vector(b.size());
    std::size_t                   nodes  = 0;
    bool                          exhausted = false;

    auto leaf = [&](IntVector const& rem) -> bool {
      if (units.empty()) return is_zero(rem);
      auto uc = lattice_coordinates(ulat, rem);
      if (!uc) return false;
      // Express rem over the unit generators and shift by the positive
      // relation until every coefficient is nonnegative.
      std::vector<IntVector> ug;
      for (auto i : units) ug.push_back(c[i]);
      auto sol = solve_integer(IntMatrix::from_columns(ug, rem.size()), rem);
      IntVector        mu  = *sol.particular;
      IntVector const& rel = b.unit_relation();
      Integer          t   = 0;
      for (std::size_t j = 0; j < mu.size(); ++j) {
        if (mu[j] < 0) {
          Integer const need = (-mu[j] + rel[j] - 1) / rel[j];
          t                  = std::max(t, need);
        }
      }
      for (std::size_t j = 0; j < mu.size(); ++j) lambda[units[j]] = mu[j] + t * rel[j];
      return true;
    };

    std::function<bool(std::size_t, IntVector const&, Integer const&)> dfs;
    dfs = [&](std::size_t k, IntVector const& rem, Integer const& budget) -> bool {
      if (++nodes > node_limit) {
        exhausted = true;
        return false;
      }
      if (k == order.size()) {
        return budget == 0 && leaf(rem);
      }
      std::size_t const gi = order[k];
      Integer const     top = budget / ell[gi];
      for (Integer lam = top; lam >= 0; --lam) {
        if (k + 1 == order.size() && lam * ell[gi] != budget) break;
        IntVector const r   = rem - lam * c[gi];
        bool            ok  = true;
        for (std::size_t f = 0; f < nf && ok; ++f) {
          Integer const s = dot(b.facets()[f], r);
          ok              = s >= 0 && (!zero_after[k + 1][f] || s == 0);
        }
        if (!ok) continue;
        lambda[gi] = lam;
        if (dfs(k + 1, r, budget - lam * ell[gi])) return true;
        if (exhausted) return false;
      }
      lambda[gi] = 0;
      return false;
    };

    if (dfs(0, *x, dot(grad, *x))) {
      IntVector sum = zero_vector(b.ambient_rank());
      for (std::size_t i = 0; i < b.size(); ++i) sum += lambda[i] * b.generator(i);
      if (sum != v) {
        throw std::logic_error("membership certificate does not re-sum");
      }
      res.verdict     = Verdict::Member;
      res.certificate = lambda;
      return res;
    }
    res.verdict = exhausted ? Verdict::Unknown : Verdict::NotMember;
    res.reason  = exhausted ? "node limit reached" : "search exhausted";
    return res;
  }

  ////////////////////////////////////////////////////////////////////////
  // Units, faces and primes
  ////////////////////////////////////////////////////////////////////////

  struct UnitGroup {
    Verdict                status = Verdict::Member;  // Unknown if a query was
    std::vector<IntVector> basis;                     // inconclusive
  };

  inline UnitGroup unit_group(AffineMonoid const& b) {
    UnitGroup              out;
    std::vector<IntVector> units;
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto r = member(b, -b.generator(i));
      if (r.verdict == Verdict::Unknown) out.status = Verdict::Unknown;
      if (r.member()) units.push_back(b.generator(i));
    }
    out.basis = lattice_basis(units, b.ambient_rank());
    return out;
  }

  struct FacePrime {
    GenSet      face = 0;   // generators of the face <Gamma>
    GenSet      ideal = 0;  // generators outside it; they generate the prime
    std::size_t face_rank = 0;
    IntVector   functional;  // supporting functional (gr(B) coordinates) when minimal
  };

  // All faces of B as generator sets, including B itself.
  inline std::vector<GenSet> faces(AffineMonoid const& b) {
    std::set<GenSet>    seen{b.all_generators()};
    std::vector<GenSet> todo{b.all_generators()};
    while (!todo.empty()) {
      GenSet const f = todo.back();
      todo.pop_back();
      for (GenSet const g : b.facet_generators()) {
        GenSet const h = f & g;
        if (h != f && seen.insert(h).second) todo.push_back(h);
      }
    }
    return {seen.begin(), seen.end()};
  }

  inline std::size_t face_rank(AffineMonoid const& b, GenSet f) {
    std::vector<IntVector> v;
    for (auto i : members_of(f)) v.push_back(b.generator_coordinates()[i]);
    return rank(v, b.group_rank());
  }

  // Minimal primes: complements of facets, each with its supporting
  // functional as certificate of divisor-closedness.
  inline std::vector<FacePrime> minimal_primes(AffineMonoid const& b) {
    std::vector<FacePrime> out;
    for (std::size_t k = 0; k < b.facets().size(); ++k) {
      FacePrime p;
      p.face       = b.facet_generators()[k];
      p.ideal      = b.all_generators() & ~p.face;
      p.face_rank  = face_rank(b, p.face);
      p.functional = b.facets()[k];
      out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](FacePrime const& x, FacePrime const& y) {
      return x.ideal < y.ideal;
    });
    return out;
  }

  struct SpectrumPoset {
    std::vector<FacePrime>                primes;
    std::vector<std::vector<std::size_t>> above;  // above[i]: j with P_i strictly inside P_j
    std::vector<std::size_t>              height;
    std::vector<std::size_t>              depth;  // dim(B/P)
    std::size_t                           dim = 0;
    std::size_t                           group_rank = 0;
    std::size_t                           unit_rank  = 0;
  };

  inline SpectrumPoset spectrum(AffineMonoid const& b) {
    SpectrumPoset out;
    for (GenSet f : faces(b)) {
      if (f == b.all_generators()) continue;
      FacePrime p;
      p.face      = f;
      p.ideal     = b.all_generators() & ~f;
      p.face_rank = face_rank(b, f);
      out.primes.push_back(p);
    }
    // Larger primes (smaller faces) last; ties broken by generator set.
    std::sort(out.primes.begin(), out.primes.end(), [](FacePrime const& x, FacePrime const& y) {
      if (x.face_rank != y.face_rank) return x.face_rank > y.face_rank;
      return x.ideal < y.ideal;
    });
    std::size_t const n = out.primes.size();
    out.above.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        GenSet const fi = out.primes[i].face, fj = out.primes[j].face;
        if (i != j && (fj & fi) == fj) out.above[i].push_back(j);
      }
    }
    // Chains from the empty set: ht(P) = 1 + max ht of primes strictly below.
    out.height.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : out.above[i]) {
        out.height[j] = std::max(out.height[j], out.height[i] + 1);
      }
    }
    out.depth.assign(n, 0);
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j : out.above[i]) {
        out.depth[i] = std::max(out.depth[i], out.depth[j] + 1);
      }
    }
    for (auto h : out.height) out.dim = std::max(out.dim, h);
    out.group_rank = b.group_rank();
    out.unit_rank  = rank(b.unit_lattice_coordinates(), b.group_rank());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Hilbert bases and normality
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    // Basis of Z^m intersected with the rational span of v.
    inline std::vector<IntVector> saturated_span(std::vector<IntVector> const& v, std::size_t m) {
      if (v.empty()) return {};
      auto orth = kernel_basis(IntMatrix::from_rows(v, m));
      if (orth.empty()) {
        std::vector<IntVector> id;
        for (std::size_t i = 0; i < m; ++i) id.push_back(unit_vector(m, i));
        return id;
      }
      return lattice_basis(kernel_basis(IntMatrix::from_rows(orth, m)), m);
    }

    // Points V t with t in [0,1)^d, for a nonsingular square V given by columns.
    inline std::vector<IntVector> parallelepiped_points(std::vector<IntVector> const& cols) {
      std::size_t const d = cols.size();
      IntMatrix const   v = IntMatrix::from_columns(cols, d);
      SmithForm const   s = smith_form(v);
      // Z^d / V Z^d: y = U x mod diag(D); representatives x = U^{-1} y.
      IntMatrix const   uinv = unimodular_inverse(s.left);
      Integer const     det  = determinant(v);
      IntMatrix         adj(d, d);  // V^{-1} = adj / det
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          IntMatrix minor(d - 1, d - 1);
          for (std::size_t r = 0, rr = 0; r < d; ++r) {
            if (r == j) continue;
            for (std::size_t c = 0, cc = 0; c < d; ++c) {
              if (c == i) continue;
              minor(rr, cc++) = v(r, c);
            }
            ++rr;
          }
          adj(i, j) = ((i + j) % 2 ? -1 : 1) * determinant(minor);
        }
      }
      std::vector<IntVector> out;
      IntVector              y = zero_vector(d);
      while (true) {
        IntVector const x = uinv * y;
        // t = adj x / det; keep fractional parts.
        IntVector const num = adj * x;
        IntVector       p   = zero_vector(d);
        for (std::size_t i = 0; i < d; ++i) {
          Integer r = num[i] % det;
          if ((r < 0) != (det < 0) && r != 0) r += det;
          // fractional part r/det in [0,1)
          p += r * cols[i];
        }
        for (auto& e : p) e /= det;
        out.push_back(p);
        std::size_t i = 0;
        for (; i < d; ++i) {
          if (++y[i] < s.invariant(i)) break;
          y[i] = 0;
        }
        if (i == d) break;
      }
      return out;
    }

    // Hilbert basis of Z^d intersected with a pointed full-dimensional cone.
    inline std::vector<IntVector> hilbert_basis_full(std::vector<IntVector> const& gens,
                                                     std::size_t                   d) {
      std::vector<IntVector> rays;
      for (auto const& g : gens) {
        if (!is_zero(g)) rays.push_back(g);
      }
      FacetData const             fd = facets_of(rays, d);
      std::set<IntVector>         cand(rays.begin(), rays.end());
      for_each_subset(rays.size(), d, [&](std::vector<std::size_t> const& idx) {
        std::vector<IntVector> cols;
        for (auto i : idx) cols.push_back(rays[i]);
        if (determinant(IntMatrix::from_columns(cols, d)) == 0) return;
        for (auto& p : parallelepiped_points(cols)) {
          if (!is_zero(p)) cand.insert(std::move(p));
        }
      });
      auto in_cone = [&](IntVector const& x) {
        for (auto const& f : fd.normals) {
          if (dot(f, x) < 0) return false;
        }
        return true;
      };
      std::vector<IntVector> out;
      for (auto const& x : cand) {
        bool red = false;
        for (auto const& y : cand) {
          if (y != x && in_cone(x - y)) {
            red = true;
            break;
          }
        }
        if (!red) out.push_back(x);
      }
      return out;
    }
  }  // namespace detail

  // Hilbert basis of Z^m intersected with the (pointed) cone spanned by v.
  inline std::vector<IntVector> hilbert_basis(std::vector<IntVector> const& v, std::size_t m) {
    auto const sat = detail::saturated_span(v, m);
    if (sat.empty()) return {};
    std::vector<IntVector> c;
    for (auto const& x : v) c.push_back(*lattice_coordinates(sat, x));
    std::vector<IntVector> out;
    for (auto const& h : detail::hilbert_basis_full(c, sat.size())) {
      out.push_back(from_coordinates(sat, h, m));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  struct NormalityResult {
    Verdict                  status = Verdict::Unknown;  // Member = normal
    bool                     normal = false;
    std::optional<IntVector> witness;  // ambient vector in the normalization, not in B
    std::vector<IntVector>   hilbert_basis;  // of gr(B) ∩ cone(B) modulo units, lifted
    std::string              reason;
  };

  // B is a maximal order iff B = gr(B) ∩ cone(B).  Units are split off first:
  // the lineality lattice must consist of units, and the pointed quotient's
  // Hilbert basis must lift into B.
  inline NormalityResult is_maximal_order(AffineMonoid const& b) {
    NormalityResult   out;
    std::size_t const d            = b.group_rank();
    bool              inconclusive = false;
    auto              ask          = [&](IntVector const& coord) {
      IntVector const amb = b.from_coordinates(coord);
      auto            r   = member(b, amb);
      if (r.verdict == Verdict::Unknown) {
        inconclusive = true;
        out.reason   = "membership inconclusive";
      } else if (!r.member() && !out.witness) {
        out.witness = amb;
      }
      return r.verdict;
    };

    std::vector<IntVector> lineality;
    if (b.facets().empty()) {
      for (std::size_t i = 0; i < d; ++i) lineality.push_back(unit_vector(d, i));
    } else if (d > 0) {
      lineality = kernel_basis(IntMatrix::from_rows(b.facets(), d));
    }
    for (auto const& w : lineality) {
      ask(w);
      ask(-w);
    }
    if (!out.witness) {
      // Project along the lineality lattice, which is saturated.
      std::size_t const u = lineality.size();
      IntMatrix         proj = IntMatrix::identity(d), lift = IntMatrix::identity(d);
      if (u > 0) {
        SmithForm const s = smith_form(IntMatrix::from_columns(lineality, d));
        proj              = s.left;
        lift              = unimodular_inverse(s.left);
      }
      std::vector<IntVector> pg;
      for (auto const& c : b.generator_coordinates()) {
        IntVector const p = proj * c;
        pg.emplace_back(p.begin() + u, p.end());
      }
      for (auto const& h : detail::hilbert_basis_full(pg, d - u)) {
        IntVector full = zero_vector(d);
        std::copy(h.begin(), h.end(), full.begin() + u);
        IntVector const c = lift * full;
        out.hilbert_basis.push_back(b.from_coordinates(c));
        ask(c);
      }
      std::sort(out.hilbert_basis.begin(), out.hilbert_basis.end());
    }
    if (out.witness) {
      out.status = Verdict::NotMember;
      out.normal = false;
    } else if (!inconclusive) {
      out.status = Verdict::Member;
      out.normal = true;
    }
    return out;
  }

  // Hilbert basis of L ∩ N^k for a sublattice L of Z^k given by generators.
  inline std::vector<IntVector> free_intersection_basis(std::size_t                   k,
                                                        std::vector<IntVector> const& lattice) {
    auto const basis = lattice_basis(lattice, k);
    if (basis.empty()) return {};
    std::size_t const d  = basis.size();
    IntMatrix const   lb = IntMatrix::from_columns(basis, k);
    // Rays of {t : Lb t >= 0}: kernels of rank d-1 row subsets.
    std::set<IntVector> rays;
    detail::for_each_subset(k, d - 1, [&](std::vector<std::size_t> const& idx) {
      std::vector<IntVector> rows;
      for (auto i : idx) rows.push_back(lb.row(i));
      IntMatrix const m = IntMatrix::from_rows(rows, d);
      if (rank(m) != d - 1) return;
      auto ker = kernel_basis(m);
      if (ker.size() != 1) return;
      IntVector t = primitive(ker[0]);
      for (int s : {1, -1}) {
        IntVector const tt = Integer(s) * t;
        IntVector const img = lb * tt;
        if (std::all_of(img.begin(), img.end(), [](Integer const& x) { return x >= 0; })) {
          rays.insert(tt);
        }
      }
    });
    if (rays.empty()) return {};
    std::vector<IntVector> out;
    for (auto const& h : hilbert_basis({rays.begin(), rays.end()}, d)) {
      out.push_back(lb * h);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // File format
  ////////////////////////////////////////////////////////////////////////

  struct AffineFile {
    AffineMonoid             monoid;
    std::vector<std::string> words;  // per generator, empty if not given
  };

  inline AffineFile parse_affine(std::string const& text) {
    std::istringstream                 in(text);
    std::string                        raw;
    std::size_t                        lineno = 0;
    std::optional<std::size_t>         rank;
    std::string                        name = "B";
    std::vector<std::string>           names;
    std::vector<IntVector>             gens;
    std::map<std::string, std::string> words;
    std::map<std::string, std::size_t> word_line;

    auto parse_label = [&](std::string const& body, std::size_t skip, std::size_t col) {
      auto colon = body.find(':');
      if (colon == std::string::npos) {
        throw ParseError("expected ':' after generator name", lineno, col);
      }
      std::string const label = detail::trim(body.substr(skip, colon - skip));
      if (label.empty() || label.find_first_of(" \t") != std::string::npos) {
        throw ParseError("bad generator name", lineno, col + skip);
      }
      return std::pair{label, body.substr(colon + 1)};
    };

    while (std::getline(in, raw)) {
      ++lineno;
      std::string const line = detail::strip_comment(raw);
      std::string const body = detail::trim(line);
      std::size_t const col  = detail::first_non_space(line) + 1;
      if (body.empty()) continue;
      std::istringstream ts(body);
      std::string        head;
      ts >> head;
      if (head == "affine") {
        std::string n, kw;
        long long   r = -1;
        if (!(ts >> n >> kw >> r) || kw != "rank" || r < 0) {
          throw ParseError("expected 'affine <name> rank <r>'", lineno, col);
        }
        name = n;
        rank = static_cast<std::size_t>(r);
      } else if (head == "gen") {
        if (!rank) throw ParseError("'gen' before 'affine' header", lineno, col);
        auto [label, rest] = parse_label(body, 3, col);
        std::istringstream vs(rest);
        IntVector          v;
        std::string        tok;
        while (vs >> tok) {
          if (tok.find_first_not_of("-+0123456789") != std::string::npos) {
            throw ParseError("bad integer '" + tok + "'", lineno, line.find(tok) + 1);
          }
          v.emplace_back(tok);
        }
        if (v.size() != *rank) {
          throw ParseError("generator " + label + " has " + std::to_string(v.size())
                               + " entries, expected " + std::to_string(*rank),
                           lineno,
                           col);
        }
        if (std::find(names.begin(), names.end(), label) != names.end()) {
          throw ParseError("duplicate generator name '" + label + "'", lineno, col);
        }
        names.push_back(label);
        gens.push_back(std::move(v));
      } else if (head == "word") {
        auto [label, rest] = parse_label(body, 4, col);
        words[label]       = detail::trim(rest);
        word_line[label]   = lineno;
      } else {
        throw ParseError("expected 'affine', 'gen' or 'word'", lineno, col);
      }
    }
    if (!rank) throw ParseError("missing 'affine' header", lineno + 1, 1);
    if (gens.empty()) throw ParseError("no generators", lineno + 1, 1);
    AffineFile out{AffineMonoid(*rank, names, gens, name), {}};
    for (auto const& [label, w] : words) {
      if (std::find(names.begin(), names.end(), label) == names.end()) {
        throw ParseError("word for unknown generator '" + label + "'", word_line[label], 1);
      }
    }
    for (auto const& n : names) {
      auto it = words.find(n);
      out.words.push_back(it == words.end() ? "" : it->second);
    }
    return out;
  }

}  // namespace workbench
