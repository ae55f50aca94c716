#pragma once

// Crossed systems: S = B w_0 ∪ B w_1 ∪ ... over an abelian base B that is
// normalised by S, read off a confluent rewriting system.  All lattice data
// (actions, table entries, offsets) is kept in gr(B) coordinates.

#include "affine.hpp"
#include "groups.hpp"
#include "monomial.hpp"
#include "rewriting.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace workbench {

  enum class Status { Verified, Refuted, Unknown };

  inline char const* to_string(Status s) {
    switch (s) {
      case Status::Verified: return "Verified";
      case Status::Refuted: return "Refuted";
      default: return "Unknown";
    }
  }

  class CrossedError : public std::runtime_error {
   public:
    enum class Kind { Commutativity, Normality, Coverage, Structure };

    CrossedError(Kind k, std::string const& msg, Word w = {})
        : std::runtime_error(msg), _kind(k), _word(std::move(w)) {}

    Kind kind() const noexcept {
      return _kind;
    }
    Word const& word() const noexcept {
      return _word;
    }

   private:
    Kind _kind;
    Word _word;
  };

  inline char const* to_string(CrossedError::Kind k) {
    switch (k) {
      case CrossedError::Kind::Commutativity: return "commutativity_failure";
      case CrossedError::Kind::Normality: return "normality_failure";
      case CrossedError::Kind::Coverage: return "coverage_failure";
      default: return "structural_error";
    }
  }

  // b w_k with b in gr(B) coordinates.
  struct Factor {
    IntVector   b;
    std::size_t k = 0;
  };

  struct CrossedSystem {
    Presentation                          presentation;
    RewriteSystem                         rs;
    AffineMonoid                          base;
    std::vector<Word>                     base_words;   // normal forms
    std::vector<Word>                     transversal;  // normal forms, w_0 = 1
    std::vector<std::string>              labels;       // transversal words as given
    std::vector<std::vector<std::size_t>> permutation;  // w_i a_j = a_{perm[i][j]} w_i
    std::vector<IntMatrix>                action;       // conjugation by w_i
    std::vector<std::vector<Factor>>      product;      // w_i w_j
    std::vector<Factor>                   letters;      // presentation generators
    std::size_t                           check_len = 0;
    std::size_t                           covered   = 0;  // normal forms factored

    std::string transversal_name(std::size_t i) const {
      if (i < labels.size()) return labels[i];
      return transversal[i].empty() ? "1" : presentation.to_string(transversal[i]);
    }

    Verdict in_base(IntVector const& c) const {
      return member(base, base.from_coordinates(c)).verdict;
    }

    // A word for an element of B given in coordinates.
    std::optional<Word> word_of(IntVector const& c) const {
      auto r = member(base, base.from_coordinates(c));
      if (!r.member()) return std::nullopt;
      Word w;
      for (std::size_t j = 0; j < base.size(); ++j) {
        for (Integer i = 0; i < r.certificate[j]; ++i) {
          w.insert(w.end(), base_words[j].begin(), base_words[j].end());
        }
      }
      return w;
    }

    IntVector act(std::size_t i, IntVector const& c) const {
      return action[i] * c;
    }
  };

  namespace detail {
    inline std::size_t max_length(std::vector<Word> const& ws) {
      std::size_t m = 0;
      for (auto const& w : ws) m = std::max(m, w.size());
      return m;
    }

    // Base elements with word length <= len, keyed by coordinates, checking
    // that words and vectors describe the same monoid.
    inline std::map<IntVector, Word> base_elements(RewriteSystem const&     rs,
                                                   AffineMonoid const&      b,
                                                   std::vector<Word> const& words,
                                                   std::size_t              len) {
      std::map<IntVector, Word> out;
      std::map<Word, IntVector> back;
      std::vector<IntVector>    level{zero_vector(b.group_rank())};
      out.emplace(level.front(), Word{});
      back.emplace(Word{}, level.front());
      while (!level.empty()) {
        std::vector<IntVector> next;
        for (auto const& v : level) {
          for (std::size_t j = 0; j < b.size(); ++j) {
            if (words[j].empty()) {
              throw CrossedError(CrossedError::Kind::Structure,
                                 "base generator " + b.names()[j] + " has the empty word");
            }
            Word w = out.at(v);
            if (w.size() + words[j].size() > len) continue;
            w.insert(w.end(), words[j].begin(), words[j].end());
            w                = rs.rewrite(w);
            IntVector const u = v + b.generator_coordinates()[j];
            auto [it, fresh]  = out.emplace(u, w);
            if (!fresh && it->second != w) {
              throw CrossedError(CrossedError::Kind::Structure,
                                 "base vectors and words disagree: one vector has two normal forms",
                                 w);
            }
            auto [bt, bfresh] = back.emplace(w, u);
            if (!bfresh && bt->second != u) {
              throw CrossedError(CrossedError::Kind::Structure,
                                 "base vectors and words disagree: one word has two vectors", w);
            }
            if (fresh) next.push_back(u);
          }
        }
        level = std::move(next);
      }
      return out;
    }

    inline Word concat(Word a, Word const& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
  }  // namespace detail

  // Builds the crossed system, checking commutativity of the base, normality
  // x B = B x for the presentation generators, and that every normal form of
  // length <= check_len factors as b w_i.
  inline CrossedSystem extract_crossed_system(Presentation const&      p,
                                              RewriteSystem const&     rs,
                                              AffineMonoid const&      base,
                                              std::vector<Word> const& base_words,
                                              std::vector<Word> const& transversal,
                                              std::size_t              check_len) {
    using K = CrossedError::Kind;
    if (!rs.confluent()) throw CrossedError(K::Structure, "rewriting system is not confluent");
    if (!p.is_homogeneous()) {
      throw CrossedError(K::Structure, "presentation must be homogeneous");
    }
    if (base_words.size() != base.size()) {
      throw CrossedError(K::Structure, "every base generator needs a word");
    }
    if (transversal.empty() || !rs.rewrite(transversal.front()).empty()) {
      throw CrossedError(K::Structure, "the transversal must start with 1");
    }
    CrossedSystem cs;
    cs.presentation = p;
    cs.rs           = rs;
    cs.base         = base;
    cs.check_len    = check_len;
    for (auto const& w : base_words) cs.base_words.push_back(rs.rewrite(w));
    for (auto const& w : transversal) {
      Word const v = rs.rewrite(w);
      for (auto const& u : cs.transversal) {
        if (u == v) throw CrossedError(K::Structure, "transversal has a repeated element", v);
      }
      cs.transversal.push_back(v);
      cs.labels.push_back(w.empty() ? "1" : p.to_string(w));
    }
    std::size_t const n  = base.size();
    std::size_t const t  = cs.transversal.size();
    std::size_t const mu = detail::max_length(cs.base_words);
    std::size_t const mt = detail::max_length(cs.transversal);
    std::size_t const len = std::max({check_len, 2 * mt, mu + 1, mu + mt});

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Word const ij = detail::concat(cs.base_words[i], cs.base_words[j]);
        Word const ji = detail::concat(cs.base_words[j], cs.base_words[i]);
        if (rs.rewrite(ij) != rs.rewrite(ji)) {
          throw CrossedError(K::Commutativity,
                             "base generators " + base.names()[i] + " and " + base.names()[j]
                                 + " do not commute",
                             ij);
        }
      }

    auto const elements = detail::base_elements(rs, base, cs.base_words, len);

    // Normal form of b w_k -> (b, k); the first factorization found is kept.
    std::map<Word, Factor> factor;
    for (std::size_t k = 0; k < t; ++k) {
      for (auto const& [v, w] : elements) {
        if (w.size() + cs.transversal[k].size() > len) continue;
        factor.emplace(rs.rewrite(detail::concat(w, cs.transversal[k])), Factor{v, k});
      }
    }

    // x a_j = b x and a_j x = x b' with b, b' in B.
    for (std::size_t x = 0; x < p.size(); ++x) {
      Word const xw{static_cast<Letter>(x)};
      for (std::size_t j = 0; j < n; ++j) {
        Word const left  = rs.rewrite(detail::concat(xw, cs.base_words[j]));
        Word const right = rs.rewrite(detail::concat(cs.base_words[j], xw));
        bool       l = false, r = false;
        for (auto const& [v, w] : elements) {
          if (w.size() != cs.base_words[j].size()) continue;
          l = l || rs.rewrite(detail::concat(w, xw)) == left;
          r = r || rs.rewrite(detail::concat(xw, w)) == right;
        }
        if (!l || !r) {
          throw CrossedError(K::Normality,
                             "generator " + p.generators()[x].name + " does not normalise "
                                 + base.names()[j],
                             l ? right : left);
        }
      }
    }

    // Conjugation by w_i permutes the base generators.
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<std::size_t> perm(n);
      for (std::size_t j = 0; j < n; ++j) {
        Word const lhs = rs.rewrite(detail::concat(cs.transversal[i], cs.base_words[j]));
        bool       found = false;
        for (std::size_t k = 0; k < n && !found; ++k) {
          if (rs.rewrite(detail::concat(cs.base_words[k], cs.transversal[i])) == lhs) {
            perm[j] = k;
            found   = true;
          }
        }
        if (!found) {
          throw CrossedError(K::Structure,
                             "conjugation by " + cs.transversal_name(i)
                                 + " does not permute the base generators",
                             lhs);
        }
      }
      std::set<std::size_t> const img(perm.begin(), perm.end());
      if (img.size() != n) {
        throw CrossedError(K::Structure,
                           "conjugation by " + cs.transversal_name(i) + " is not a bijection");
      }
      // Matrix M with M c_j = c_perm[j]; the c_j span Z^d.
      std::size_t const      d = base.group_rank();
      auto const&            c = base.generator_coordinates();
      IntMatrix const        cm = IntMatrix::from_columns(c, d);
      std::vector<IntVector> cols;
      for (std::size_t r = 0; r < d; ++r) {
        auto sol = solve_integer(cm, unit_vector(d, r));
        if (!sol.feasible()) throw std::logic_error("generators do not span gr(B)");
        IntVector col = zero_vector(d);
        for (std::size_t j = 0; j < n; ++j) col += (*sol.particular)[j] * c[perm[j]];
        cols.push_back(col);
      }
      IntMatrix const m = IntMatrix::from_columns(cols, d);
      for (std::size_t j = 0; j < n; ++j) {
        if (m * c[j] != c[perm[j]]) {
          throw CrossedError(K::Structure, "conjugation by " + cs.transversal_name(i)
                                               + " is not linear on gr(B)");
        }
      }
      cs.permutation.push_back(std::move(perm));
      cs.action.push_back(m);
    }

    cs.product.assign(t, std::vector<Factor>(t));
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        Word const w  = rs.rewrite(detail::concat(cs.transversal[i], cs.transversal[j]));
        auto       it = factor.find(w);
        if (it == factor.end()) {
          throw CrossedError(K::Coverage, "product of transversal elements is not in any B w_k",
                             w);
        }
        cs.product[i][j] = it->second;
      }
    for (std::size_t x = 0; x < p.size(); ++x) {
      auto it = factor.find(rs.rewrite(Word{static_cast<Letter>(x)}));
      if (it == factor.end()) {
        throw CrossedError(K::Coverage, "generator " + p.generators()[x].name
                                            + " is not in any B w_k",
                           Word{static_cast<Letter>(x)});
      }
      cs.letters.push_back(it->second);
    }
    for (auto const& w : enumerate_elements(rs, check_len).elements) {
      if (!factor.count(w)) {
        throw CrossedError(K::Coverage, "normal form " + p.to_string(w)
                                            + " does not factor as b w_k",
                           w);
      }
      ++cs.covered;
    }
    return cs;
  }

  // Action/product consistency: (w_i w_j) w_l and w_i (w_j w_l) computed from
  // the table agree with the normal form of w_i w_j w_l.  Returns the first
  // failing triple.
  inline std::optional<std::array<std::size_t, 3>> check_associativity(CrossedSystem const& cs) {
    std::size_t const t = cs.transversal.size();
    auto              nf_of = [&](IntVector const& b, std::size_t k) -> std::optional<Word> {
      auto w = cs.word_of(b);
      if (!w) return std::nullopt;
      return cs.rs.rewrite(detail::concat(*w, cs.transversal[k]));
    };
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j)
        for (std::size_t l = 0; l < t; ++l) {
          Word const direct = cs.rs.rewrite(detail::concat(
              detail::concat(cs.transversal[i], cs.transversal[j]), cs.transversal[l]));
          Factor const& ij  = cs.product[i][j];
          Factor const& kl  = cs.product[ij.k][l];
          Factor const& jl  = cs.product[j][l];
          Factor const& ik  = cs.product[i][jl.k];
          auto          a   = nf_of(ij.b + kl.b, kl.k);
          auto          b   = nf_of(cs.act(i, jl.b) + ik.b, ik.k);
          if (!a || !b || *a != direct || *b != direct) return std::array{i, j, l};
        }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cosets of N = gr(B) and the group extension
  ////////////////////////////////////////////////////////////////////////

  struct CosetStructure {
    std::vector<std::size_t> class_of;        // transversal index -> quotient element
    std::vector<IntVector>   offset;          // w_i = offset[i] * w_rep(class_of[i])
    std::vector<std::size_t> representative;  // quotient element -> transversal index
    ExtensionData            extension;

    // Element of G for b w_k.
    GroupElement element(Factor const& f) const {
      return {f.b + offset[f.k], class_of[f.k]};
    }
  };

  inline CosetStructure group_extension_of(CrossedSystem const& cs) {
    std::size_t const t = cs.transversal.size();
    std::size_t const d = cs.base.group_rank();
    // Weighted union-find: w_i = off[i] * w_parent[i].
    std::vector<std::size_t> parent(t);
    std::vector<IntVector>   off(t, zero_vector(d));
    for (std::size_t i = 0; i < t; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
      if (parent[i] == i) return i;
      std::size_t const r = find(parent[i]);
      off[i]              = off[i] + off[parent[i]];
      parent[i]           = r;
      return r;
    };
    // Record w_i = n w_j.
    auto unite = [&](std::size_t i, std::size_t j, IntVector const& n) {
      std::size_t const ri = find(i), rj = find(j);
      if (ri == rj) {
        if (off[i] - off[j] != n) {
          throw CrossedError(CrossedError::Kind::Structure,
                             "inconsistent coset merge of " + cs.transversal_name(i) + " and "
                                 + cs.transversal_name(j));
        }
        return false;
      }
      // w_ri = (n + off[j] - off[i]) w_rj; the smaller index becomes the root.
      IntVector const m = n + off[j] - off[i];
      if (ri < rj) {
        parent[rj] = ri;
        off[rj]    = -m;
      } else {
        parent[ri] = rj;
        off[ri]    = m;
      }
      return true;
    };
    std::vector<IntMatrix> inverse_action;
    for (auto const& m : cs.action) inverse_action.push_back(unimodular_inverse(m));
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t l = 0; l < t; ++l)
        for (std::size_t i = 0; i < t; ++i)
          for (std::size_t j = i + 1; j < t; ++j) {
            // Right: w_i w_l and w_j w_l in one class.
            Factor const& a = cs.product[i][l];
            Factor const& b = cs.product[j][l];
            if (find(a.k) == find(b.k)) {
              IntVector const n = a.b + off[a.k] - b.b - off[b.k];
              changed           = unite(i, j, n) || changed;
            }
            // Left: w_l w_i and w_l w_j in one class.
            Factor const& c = cs.product[l][i];
            Factor const& e = cs.product[l][j];
            if (find(c.k) == find(e.k)) {
              IntVector const n = inverse_action[l] * (c.b + off[c.k] - e.b - off[e.k]);
              changed           = unite(i, j, n) || changed;
            }
          }
    }
    CosetStructure out;
    out.class_of.assign(t, 0);
    out.offset.assign(t, zero_vector(d));
    std::map<std::size_t, std::size_t> root_class;
    for (std::size_t i = 0; i < t; ++i) {
      std::size_t const r = find(i);
      if (!root_class.count(r)) {
        root_class.emplace(r, out.representative.size());
        out.representative.push_back(r);
      }
      out.class_of[i] = root_class.at(r);
      out.offset[i]   = off[i];
    }
    std::size_t const q = out.representative.size();
    FiniteQuotientTable table;
    for (std::size_t c = 0; c < q; ++c) {
      table.names.push_back("[" + cs.transversal_name(out.representative[c]) + "]");
    }
    table.identity = 0;
    table.mul.assign(q, std::vector<std::size_t>(q));
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        std::size_t const ci = out.class_of[i], cj = out.class_of[j];
        std::size_t const ck = out.class_of[cs.product[i][j].k];
        if (i == out.representative[ci] && j == out.representative[cj]) table.mul[ci][cj] = ck;
      }
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        if (table.mul[out.class_of[i]][out.class_of[j]] != out.class_of[cs.product[i][j].k]) {
          throw CrossedError(CrossedError::Kind::Structure,
                             "cosets of gr(B) do not multiply consistently at ("
                                 + cs.transversal_name(i) + ", " + cs.transversal_name(j) + ")");
        }
      }
    ExtensionData e = ExtensionData::trivial(d, std::move(table));
    for (std::size_t c = 0; c < q; ++c) {
      e.action[c] = cs.action[out.representative[c]];
      for (std::size_t c2 = 0; c2 < q; ++c2) {
        Factor const& f = cs.product[out.representative[c]][out.representative[c2]];
        e.cocycle[c][c2] = f.b + out.offset[f.k];
      }
    }
    out.extension = std::move(e);
    return out;
  }

  // Whether (n, c) lies in S = ∪ B w_k.
  inline Verdict in_monoid(CrossedSystem const& cs, CosetStructure const& co,
                           GroupElement const& g, IntVector* base_part = nullptr,
                           std::size_t* index = nullptr) {
    Verdict out = Verdict::NotMember;
    for (std::size_t k = 0; k < cs.transversal.size(); ++k) {
      if (co.class_of[k] != g.coset) continue;
      IntVector const b = g.vector - co.offset[k];
      Verdict const   v = cs.in_base(b);
      if (v == Verdict::Member) {
        if (base_part) *base_part = b;
        if (index) *index = k;
        return v;
      }
      if (v == Verdict::Unknown) out = Verdict::Unknown;
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Orbits of minimal primes and traces
  ////////////////////////////////////////////////////////////////////////

  struct TraceGenerator {
    GenSet      support = 0;  // sum of these base generators
    IntVector   vector;       // gr(B) coordinates
    std::string label;
  };

  struct Orbit {
    std::vector<std::size_t>    primes;  // indices into minimal_primes(base)
    std::vector<TraceGenerator> trace;
  };

  struct OrbitDecomposition {
    std::vector<FacePrime>                primes;
    std::vector<std::vector<std::size_t>> prime_permutation;  // per transversal element
    std::vector<Orbit>                    orbits;
  };

  inline std::string label_of(AffineMonoid const& b, GenSet s) {
    std::string out;
    for (auto i : members_of(s)) out += (out.empty() ? "" : " ") + b.names()[i];
    return out.empty() ? "1" : out;
  }

  inline std::string prime_label(AffineMonoid const& b, FacePrime const& p) {
    std::string out = "(";
    bool        first = true;
    for (auto i : members_of(p.ideal)) {
      out += (first ? "" : ",") + b.names()[i];
      first = false;
    }
    return out + ")";
  }

  // Whether v (coordinates, in B) lies in every prime of the orbit.
  inline bool in_trace(OrbitDecomposition const& od, Orbit const& o, IntVector const& v) {
    for (auto q : o.primes) {
      if (dot(od.primes[q].functional, v) <= 0) return false;
    }
    return true;
  }

  inline OrbitDecomposition prime_action_orbits(CrossedSystem const& cs) {
    OrbitDecomposition out;
    auto const&        b = cs.base;
    out.primes           = minimal_primes(b);
    std::size_t const np = out.primes.size();
    for (auto const& perm : cs.permutation) {
      std::vector<std::size_t> pp(np);
      for (std::size_t q = 0; q < np; ++q) {
        GenSet img = 0;
        for (auto j : members_of(out.primes[q].ideal)) img |= GenSet(1) << perm[j];
        bool found = false;
        for (std::size_t r = 0; r < np && !found; ++r) {
          if (out.primes[r].ideal == img) {
            pp[q] = r;
            found = true;
          }
        }
        if (!found) {
          throw CrossedError(CrossedError::Kind::Structure,
                             "action does not permute the minimal primes of the base");
        }
      }
      out.prime_permutation.push_back(std::move(pp));
    }
    std::vector<std::size_t> orbit_of(np, np);
    for (std::size_t q = 0; q < np; ++q) {
      if (orbit_of[q] != np) continue;
      Orbit                    o;
      std::vector<std::size_t> todo{q};
      orbit_of[q] = out.orbits.size();
      while (!todo.empty()) {
        std::size_t const r = todo.back();
        todo.pop_back();
        o.primes.push_back(r);
        for (auto const& pp : out.prime_permutation) {
          if (orbit_of[pp[r]] == np) {
            orbit_of[pp[r]] = out.orbits.size();
            todo.push_back(pp[r]);
          }
        }
      }
      std::sort(o.primes.begin(), o.primes.end());
      out.orbits.push_back(std::move(o));
    }

    // The intersection of the orbit's primes is generated by the sums over
    // minimal hitting sets of their generator sets.
    for (auto& o : out.orbits) {
      std::vector<GenSet> hitting;
      for (std::size_t k = 1; k <= std::min(o.primes.size(), b.size()); ++k) {
        detail::for_each_subset(b.size(), k, [&](std::vector<std::size_t> const& idx) {
          GenSet s = 0;
          for (auto i : idx) s |= GenSet(1) << i;
          for (GenSet h : hitting) {
            if ((h & s) == h) return;
          }
          for (auto q : o.primes) {
            if ((out.primes[q].ideal & s) == 0) return;
          }
          hitting.push_back(s);
        });
      }
      std::vector<TraceGenerator> gens;
      for (GenSet s : hitting) {
        IntVector v = zero_vector(b.group_rank());
        for (auto i : members_of(s)) v += b.generator_coordinates()[i];
        bool dup = false;
        for (auto const& g : gens) dup = dup || g.vector == v;
        if (!dup) gens.push_back({s, v, label_of(b, s)});
      }
      // Drop generators that are multiples of others.
      for (auto const& g : gens) {
        bool redundant = false;
        for (auto const& h : gens) {
          if (&g == &h) continue;
          if (member(b, b.from_coordinates(g.vector - h.vector)).member()) {
            redundant = true;
            break;
          }
        }
        if (!redundant) o.trace.push_back(g);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Certificates for the minimal primes of S
  ////////////////////////////////////////////////////////////////////////

  // For minimal primes Q', Q in one orbit: a transversal element w with
  // sigma_w(Q') = Q and t = b w_k in S with w t in B outside Q.  Then
  // w p t lies in B \ Q for every p in B \ Q'.  With a certificate for every
  // ordered pair, a prime of S over a minimal prime of B meets B exactly in
  // the intersection of the whole orbit.
  struct TransferCertificate {
    std::size_t source      = 0;  // Q'
    std::size_t target      = 0;  // Q
    bool        found       = false;
    std::size_t transversal = 0;  // w
    IntVector   b;                // t = b w_k
    std::size_t k = 0;
    IntVector   product;          // w t, coordinates
  };

  struct TransferReport {
    Status                           status = Status::Verified;
    std::vector<TransferCertificate> certificates;
  };

  inline TransferReport transfer_certificates(CrossedSystem const&      cs,
                                              CosetStructure const&     co,
                                              OrbitDecomposition const& od) {
    TransferReport    out;
    auto const&       b = cs.base;
    std::size_t const t = cs.transversal.size();
    for (auto const& orbit : od.orbits)
      for (auto q : orbit.primes) {
        // Candidate b: 0, generators off Q', and sums of two of them.
        std::vector<IntVector> cands{zero_vector(b.group_rank())};
        auto const             face = members_of(od.primes[q].face);
        for (std::size_t x = 0; x < face.size(); ++x) {
          cands.push_back(b.generator_coordinates()[face[x]]);
        }
        for (std::size_t x = 0; x < face.size(); ++x)
          for (std::size_t y = x; y < face.size(); ++y)
            cands.push_back(b.generator_coordinates()[face[x]]
                            + b.generator_coordinates()[face[y]]);
        for (auto target : orbit.primes) {
          TransferCertificate c;
          c.source             = q;
          c.target             = target;
          IntVector const& ell = od.primes[target].functional;
          for (std::size_t i = 0; i < t && !c.found; ++i) {
            if (od.prime_permutation[i][q] != target) continue;
            for (std::size_t k = 0; k < t && !c.found; ++k) {
              Factor const& f = cs.product[i][k];
              if (co.class_of[f.k] != 0) continue;
              IntVector const base_part = f.b + co.offset[f.k];  // w_i w_k in N
              for (auto const& bb : cands) {
                IntVector const v = cs.act(i, bb) + base_part;
                if (dot(ell, v) != 0) continue;
                if (cs.in_base(v) != Verdict::Member) continue;
                c.found       = true;
                c.transversal = i;
                c.b           = bb;
                c.k           = k;
                c.product     = v;
                break;
              }
            }
          }
          if (!c.found) out.status = Status::Unknown;
          out.certificates.push_back(std::move(c));
        }
      }
    return out;
  }

  // Separation by a central z with b w b' in z S for trace generators
  // of distinct orbits, and a power of z in every x S.
  struct SeparationReport {
    Status                   status = Status::Unknown;
    std::vector<IntVector>   central_candidates;
    std::vector<std::string> candidate_labels;
    std::optional<std::size_t> central;  // index of the candidate used
    std::size_t              instances = 0;  // pair checks performed for it
    std::string              failure;        // first failing instance, if any
    std::vector<std::pair<std::string, std::optional<std::size_t>>> powers;  // x -> m
    std::size_t              power_bound = 0;
    bool                     vacuous = false;
  };

  inline SeparationReport separation_certificates(CrossedSystem const&      cs,
                                                  CosetStructure const&     co,
                                                  OrbitDecomposition const& od,
                                                  std::size_t               power_bound = 4) {
    SeparationReport  out;
    out.power_bound   = power_bound;
    auto const&       b = cs.base;
    std::size_t const n = b.size();
    out.vacuous         = od.orbits.size() <= 1;

    std::vector<bool> done(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      GenSet                   orbit = GenSet(1) << j;
      std::vector<std::size_t> todo{j};
      done[j] = true;
      while (!todo.empty()) {
        std::size_t const a = todo.back();
        todo.pop_back();
        for (auto const& perm : cs.permutation) {
          if (!done[perm[a]]) {
            done[perm[a]] = true;
            orbit |= GenSet(1) << perm[a];
            todo.push_back(perm[a]);
          }
        }
      }
      IntVector z = zero_vector(b.group_rank());
      for (auto i : members_of(orbit)) z += b.generator_coordinates()[i];
      bool fixed = true;
      for (std::size_t i = 0; i < cs.transversal.size(); ++i) fixed = fixed && cs.act(i, z) == z;
      bool dup = false;
      for (auto const& c : out.central_candidates) dup = dup || c == z;
      if (fixed && !dup) {
        out.central_candidates.push_back(z);
        out.candidate_labels.push_back(label_of(b, orbit));
      }
    }

    bool unknown = false;
    for (std::size_t zi = 0; zi < out.central_candidates.size() && !out.central; ++zi) {
      IntVector const& z       = out.central_candidates[zi];
      std::size_t      count   = 0;
      bool             ok      = true;
      std::string      failure;
      for (std::size_t o1 = 0; o1 < od.orbits.size() && ok; ++o1)
        for (std::size_t o2 = 0; o2 < od.orbits.size() && ok; ++o2) {
          if (o1 == o2) continue;
          for (auto const& g1 : od.orbits[o1].trace)
            for (auto const& g2 : od.orbits[o2].trace)
              for (std::size_t i = 0; i < cs.transversal.size() && ok; ++i) {
                ++count;
                Verdict const v = cs.in_base(g1.vector + cs.act(i, g2.vector) - z);
                if (v != Verdict::Member) {
                  ok = false;
                  if (v == Verdict::Unknown) unknown = true;
                  failure = g1.label + " * " + cs.transversal_name(i) + " * " + g2.label
                            + " not in " + out.candidate_labels[zi] + " S";
                }
              }
        }
      if (ok) {
        out.central   = zi;
        out.instances = count;
      } else if (out.failure.empty()) {
        out.failure = failure;
      }
    }
    if (!out.central) {
      out.status = Status::Unknown;
      (void) unknown;
      return out;
    }
    out.failure.clear();

    // z^m in x S, i.e. x^-1 z^m in S.
    auto const&  ext   = co.extension;
    IntVector const& z = out.central_candidates[*out.central];
    bool         all   = true;
    for (std::size_t x = 0; x < cs.presentation.size(); ++x) {
      GroupElement const xi = ext.inverse(co.element(cs.letters[x]));
      std::optional<std::size_t> found;
      for (std::size_t m = 1; m <= power_bound && !found; ++m) {
        GroupElement const g = ext.multiply(xi, GroupElement{Integer(m) * z, 0});
        if (in_monoid(cs, co, g) == Verdict::Member) found = m;
      }
      all = all && found.has_value();
      out.powers.emplace_back(cs.presentation.generators()[x].name, found);
    }
    out.status = all ? Status::Verified : Status::Unknown;
    return out;
  }

  struct MinimalPrimeOfS {
    std::size_t                 orbit = 0;
    std::vector<TraceGenerator> trace;
  };

  struct MinimalPrimeReport {
    Status                       status = Status::Unknown;
    std::vector<MinimalPrimeOfS> primes;
    std::string                  reason;
  };

  inline MinimalPrimeReport minimal_primes_of_S(OrbitDecomposition const& od,
                                                TransferReport const&     tr) {
    MinimalPrimeReport out;
    if (tr.status != Status::Verified) {
      out.reason = "transfer certificates incomplete";
      return out;
    }
    out.status = Status::Verified;
    out.reason = "one minimal prime per orbit; its trace is the orbit intersection";
    for (std::size_t o = 0; o < od.orbits.size(); ++o) out.primes.push_back({o, od.orbits[o].trace});
    return out;
  }

  inline Status invariance_condition(MinimalPrimeReport const& mp) {
    return mp.status;
  }

  ////////////////////////////////////////////////////////////////////////
  // Bounded maximality
  ////////////////////////////////////////////////////////////////////////

  struct Escape {
    bool                     found = false;
    std::string              path;     // e.g. "s x3 x1"
    IntVector                element;  // the element of N outside B
    std::size_t              explored = 0;
    bool                     inconclusive = false;  // a membership query was Unknown
  };

  // BFS over products of s with generators of S (on either side) and with s
  // itself, up to radius multiplications, for an element of N outside B.
  inline Escape find_escape(CrossedSystem const& cs, CosetStructure const& co,
                            GroupElement const& s, std::size_t radius) {
    auto const& ext = co.extension;
    Escape      out;
    std::vector<std::pair<GroupElement, std::string>> gens;
    for (std::size_t x = 0; x < cs.presentation.size(); ++x) {
      gens.emplace_back(co.element(cs.letters[x]), cs.presentation.generators()[x].name);
    }
    struct Node {
      GroupElement g;
      std::string  path;
    };
    std::set<std::pair<IntVector, std::size_t>> seen{{s.vector, s.coset}};
    std::vector<Node>                           level{{s, "s"}};
    for (std::size_t depth = 0;; ++depth) {
      for (auto const& nd : level) {
        ++out.explored;
        if (nd.g.coset != 0) continue;
        Verdict const v = cs.in_base(nd.g.vector);
        if (v == Verdict::NotMember) {
          out.found   = true;
          out.path    = nd.path;
          out.element = nd.g.vector;
          return out;
        }
        if (v == Verdict::Unknown) out.inconclusive = true;
      }
      if (depth == radius) break;
      std::vector<Node> next;
      auto              push = [&](GroupElement g, std::string path) {
        if (seen.emplace(g.vector, g.coset).second) next.push_back({std::move(g), std::move(path)});
      };
      for (auto const& nd : level) {
        for (auto const& [g, name] : gens) {
          push(ext.multiply(nd.g, g), nd.path + " " + name);
          push(ext.multiply(g, nd.g), name + " " + nd.path);
        }
        push(ext.multiply(nd.g, s), nd.path + " s");
      }
      level = std::move(next);
    }
    return out;
  }

  struct WitnessResult {
    std::size_t  transversal = 0;
    IntVector    x;  // s = x w_i, x in coordinates
    Escape       escape;
  };

  struct NamedWitness {
    std::string         name;
    IntVector           x;     // coordinates
    Word                word;  // s = x * word
    std::optional<Word> then;  // declared escape: s * then in N \ B
  };

  struct NamedWitnessResult {
    std::string              name;
    bool                     in_S = false;
    Escape                   escape;
    std::optional<bool>      declared_escapes;
    std::optional<IntVector> declared_element;
  };

  enum class MaximalityStatus { VerifiedUpToBounds, PossibleCounterexample };

  inline char const* to_string(MaximalityStatus s) {
    return s == MaximalityStatus::VerifiedUpToBounds ? "VerifiedUpToBounds"
                                                     : "PossibleCounterexample";
  }

  struct MaximalityReport {
    MaximalityStatus                status = MaximalityStatus::VerifiedUpToBounds;
    std::size_t                     radius = 0;
    std::size_t                     box    = 0;
    std::size_t                     candidates = 0;  // x w_i examined
    std::size_t                     skipped    = 0;  // already in S
    std::size_t                     absorbed   = 0;
    std::vector<WitnessResult>      failures;        // BFS exhausted without escape
    std::vector<NamedWitnessResult> named;
  };

  inline std::size_t thread_count() {
    if (char const* s = std::getenv("WORKBENCH_THREADS")) {
      long v = std::strtol(s, nullptr, 10);
      if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  inline GroupElement element_of_word(CrossedSystem const& cs, CosetStructure const& co,
                                      Word const& w) {
    GroupElement g = co.extension.identity();
    for (Letter x : w) g = co.extension.multiply(g, co.element(cs.letters[x]));
    return g;
  }

  inline MaximalityReport maximality_check(CrossedSystem const&             cs,
                                           CosetStructure const&            co,
                                           std::size_t                      radius,
                                           std::size_t                      box,
                                           std::vector<NamedWitness> const& named = {},
                                           std::size_t                      threads = 0) {
    MaximalityReport  out;
    out.radius        = radius;
    out.box           = box;
    std::size_t const d = cs.base.group_rank();
    std::size_t const t = cs.transversal.size();

    std::vector<std::pair<std::size_t, IntVector>> work;
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<long long> v(d, -static_cast<long long>(box));
      while (true) {
        work.emplace_back(i, from_ll(v));
        std::size_t k = 0;
        while (k < d && v[k] == static_cast<long long>(box)) v[k++] = -static_cast<long long>(box);
        if (k == d) break;
        ++v[k];
      }
    }
    out.candidates = work.size();

    enum class Outcome { Skipped, Absorbed, Failed };
    std::vector<Outcome>       outcome(work.size());
    std::vector<WitnessResult> result(work.size());
    std::atomic<std::size_t>   next{0};
    auto                       run = [&] {
      while (true) {
        std::size_t const w = next.fetch_add(1);
        if (w >= work.size()) return;
        auto const& [i, x] = work[w];
        GroupElement const s{x + co.offset[i], co.class_of[i]};
        if (in_monoid(cs, co, s) == Verdict::Member) {
          outcome[w] = Outcome::Skipped;
          continue;
        }
        Escape e   = find_escape(cs, co, s, radius);
        outcome[w] = e.found ? Outcome::Absorbed : Outcome::Failed;
        result[w]  = {i, x, std::move(e)};
      }
    };
    std::size_t const nt = std::max<std::size_t>(1, std::min(threads ? threads : thread_count(),
                                                              work.size()));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < nt; ++k) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();

    for (std::size_t w = 0; w < work.size(); ++w) {
      switch (outcome[w]) {
        case Outcome::Skipped: ++out.skipped; break;
        case Outcome::Absorbed: ++out.absorbed; break;
        case Outcome::Failed: out.failures.push_back(std::move(result[w])); break;
      }
    }
    if (!out.failures.empty()) out.status = MaximalityStatus::PossibleCounterexample;

    for (auto const& nw : named) {
      NamedWitnessResult r;
      r.name = nw.name;
      GroupElement const s =
          co.extension.multiply(GroupElement{nw.x, 0}, element_of_word(cs, co, nw.word));
      r.in_S = in_monoid(cs, co, s) == Verdict::Member;
      if (!r.in_S) r.escape = find_escape(cs, co, s, radius);
      if (nw.then) {
        GroupElement const e = co.extension.multiply(s, element_of_word(cs, co, *nw.then));
        r.declared_escapes   = e.coset == 0 && cs.in_base(e.vector) == Verdict::NotMember;
        if (e.coset == 0) r.declared_element = e.vector;
      }
      out.named.push_back(std::move(r));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Dimension and the structure report
  ////////////////////////////////////////////////////////////////////////

  struct DimensionReport {
    std::size_t                dim_S = 0;
    std::optional<std::size_t> clkdim;  // absent when the plinth length is not computed
    std::size_t                unit_rank = 0;
  };

  inline DimensionReport dimension_report(CrossedSystem const& cs) {
    DimensionReport out;
    auto const      units = unit_group(cs.base);
    out.unit_rank         = units.basis.size();
    out.dim_S             = cs.base.group_rank() - out.unit_rank;
    if (out.unit_rank == 0 && units.status != Verdict::Unknown) out.clkdim = out.dim_S;
    return out;
  }

  struct Condition {
    std::string name;
    Status      status = Status::Unknown;
    std::string detail;
  };

  struct Theorem33Report {
    std::vector<Condition> conditions;
    Status                 overall = Status::Unknown;
    std::string            verdict;
    // Supporting data.
    NormalityResult    normality;
    CosetStructure     cosets;
    GroupVerdict       delta_plus;
    GroupVerdict       dihedral;
    OrbitDecomposition orbits;
    TransferReport     transfer;
    SeparationReport   separation;
    MinimalPrimeReport minimal;
    MaximalityReport   maximality;
    DimensionReport    dimension;
  };

  inline Theorem33Report theorem33_report(CrossedSystem const&             cs,
                                          std::size_t                      radius,
                                          std::size_t                      box,
                                          std::vector<NamedWitness> const& named = {}) {
    Theorem33Report r;
    r.normality = is_maximal_order(cs.base);
    r.cosets    = group_extension_of(cs);
    auto check  = validate_extension(r.cosets.extension);
    if (!check.ok) {
      throw CrossedError(CrossedError::Kind::Structure,
                         "derived group extension is invalid: " + check.violation);
    }
    r.delta_plus = delta_plus_trivial(r.cosets.extension);
    r.dihedral   = dihedral_free(r.cosets.extension);
    r.orbits     = prime_action_orbits(cs);
    r.transfer   = transfer_certificates(cs, r.cosets, r.orbits);
    r.separation = separation_certificates(cs, r.cosets, r.orbits);
    r.minimal    = minimal_primes_of_S(r.orbits, r.transfer);
    r.dimension  = dimension_report(cs);

    auto add = [&](std::string n, Status s, std::string d) {
      r.conditions.push_back({std::move(n), s, std::move(d)});
    };
    add("base_normal",
        r.normality.status == Verdict::Member      ? Status::Verified
        : r.normality.status == Verdict::NotMember ? Status::Refuted
                                                   : Status::Unknown,
        r.normality.reason);
    add("acc", Status::Verified,
        "finitely generated base and " + std::to_string(cs.transversal.size())
            + " components B w; coverage checked to length " + std::to_string(cs.check_len));
    add("delta_plus", r.delta_plus.holds ? Status::Verified : Status::Refuted,
        r.delta_plus.explanation);
    add("dihedral_free", r.dihedral.holds ? Status::Verified : Status::Refuted,
        r.dihedral.explanation);
    add("invariance", invariance_condition(r.minimal), r.minimal.reason);

    bool refuted = false, unknown = false;
    for (auto const& c : r.conditions) {
      refuted = refuted || c.status == Status::Refuted;
      unknown = unknown || c.status == Status::Unknown;
    }
    // The bounded search only makes sense over a normal base.
    if (r.normality.status == Verdict::Member) {
      r.maximality = maximality_check(cs, r.cosets, radius, box, named);
      bool const ok = r.maximality.status == MaximalityStatus::VerifiedUpToBounds;
      add("s_maximal", ok ? Status::Verified : Status::Unknown,
          std::string(to_string(r.maximality.status)) + " (radius " + std::to_string(radius)
              + ", box " + std::to_string(box) + ")");
      unknown = unknown || !ok;
    } else {
      add("s_maximal", Status::Unknown, "skipped: base is not a maximal order");
      unknown = true;
    }
    if (refuted) {
      r.overall = Status::Refuted;
      r.verdict = "not a prime Noetherian maximal order";
    } else if (unknown) {
      r.overall = Status::Unknown;
      r.verdict = "undecided within bounds";
    } else {
      r.overall = Status::Verified;
      r.verdict = "prime Noetherian maximal order";
    }
    return r;
  }

}  // namespace workbench
