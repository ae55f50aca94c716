#pragma once

// Monomial matrices over a free abelian group C = Z^c: an n x n matrix with
// exactly one entry per row and column, row i holding the exponent vector
// e_i in column perm[i].
//
// File format:
//
//   monomial size 4 rank 4
//   gen x1: 2 1 4 3 | 1 0 0 0 ; 0 0 0 0 ; -1 1 1 0 ; 0 0 0 0
//
// Permutations are 1-based in files, 0-based in memory.

#include "rewriting.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

namespace workbench {

  struct MonomialMatrix {
    std::vector<std::size_t> perm;     // row i -> column perm[i]
    std::vector<IntVector>   entries;  // entries[i] sits at (i, perm[i])

    static MonomialMatrix identity(std::size_t n, std::size_t c) {
      MonomialMatrix m;
      for (std::size_t i = 0; i < n; ++i) m.perm.push_back(i);
      m.entries.assign(n, zero_vector(c));
      return m;
    }

    std::size_t size() const noexcept {
      return perm.size();
    }

    bool operator==(MonomialMatrix const&) const = default;
    bool operator<(MonomialMatrix const& o) const {
      return std::tie(perm, entries) < std::tie(o.perm, o.entries);
    }

    // Exponent vector at (i, j), if that entry is nonzero.
    std::optional<IntVector> at(std::size_t i, std::size_t j) const {
      if (perm[i] != j) return std::nullopt;
      return entries[i];
    }
  };

  inline MonomialMatrix operator*(MonomialMatrix const& a, MonomialMatrix const& b) {
    MonomialMatrix r;
    r.perm.resize(a.size());
    r.entries.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::size_t const j = a.perm[i];
      r.perm[i]           = b.perm[j];
      r.entries[i]        = a.entries[i] + b.entries[j];
    }
    return r;
  }

  inline std::string format_monomial(MonomialMatrix const& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? " " : "") << m.perm[i] + 1;
    os << " |";
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) os << " ;";
      for (auto const& x : m.entries[i]) os << ' ' << x;
    }
    return os.str();
  }

  struct MonomialRep {
    std::size_t                           size = 0;
    std::size_t                           rank = 0;
    std::map<std::string, MonomialMatrix> images;  // by generator name

    MonomialMatrix image(Presentation const& p, Word const& w) const {
      MonomialMatrix m = MonomialMatrix::identity(size, rank);
      for (Letter x : w) m = m * images.at(p.generators()[x].name);
      return m;
    }
  };

  inline MonomialRep parse_monomial_rep(std::string const& text) {
    std::istringstream in(text);
    std::string        raw;
    std::size_t        lineno = 0;
    bool               header = false;
    MonomialRep        rep;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string const line = detail::strip_comment(raw);
      std::string const body = detail::trim(line);
      std::size_t const col  = detail::first_non_space(line) + 1;
      if (body.empty()) continue;
      std::istringstream ts(body);
      std::string        head;
      ts >> head;
      if (head == "monomial") {
        std::string k1, k2;
        long long   n = -1, c = -1;
        if (!(ts >> k1 >> n >> k2 >> c) || k1 != "size" || k2 != "rank" || n <= 0 || c < 0) {
          throw ParseError("expected 'monomial size <n> rank <c>'", lineno, col);
        }
        rep.size = static_cast<std::size_t>(n);
        rep.rank = static_cast<std::size_t>(c);
        header   = true;
      } else if (head == "gen") {
        if (!header) throw ParseError("'gen' before 'monomial' header", lineno, col);
        auto colon = body.find(':');
        auto bar   = body.find('|');
        if (colon == std::string::npos || bar == std::string::npos || bar < colon) {
          throw ParseError("expected 'gen <name>: <perm> | <rows>'", lineno, col);
        }
        std::string const name = detail::trim(body.substr(3, colon - 3));
        if (name.empty()) throw ParseError("missing generator name", lineno, col);
        if (rep.images.count(name)) {
          throw ParseError("generator '" + name + "' given twice", lineno, col);
        }
        MonomialMatrix     m;
        std::istringstream ps(body.substr(colon + 1, bar - colon - 1));
        long long          j;
        std::vector<bool>  used(rep.size, false);
        while (ps >> j) {
          if (j < 1 || static_cast<std::size_t>(j) > rep.size || used[j - 1]) {
            throw ParseError("permutation entries must be distinct values in 1.." +
                                 std::to_string(rep.size),
                             lineno, col + colon + 1);
          }
          used[j - 1] = true;
          m.perm.push_back(static_cast<std::size_t>(j - 1));
        }
        if (!ps.eof() || m.perm.size() != rep.size) {
          throw ParseError("permutation must have " + std::to_string(rep.size) + " entries",
                           lineno, col + colon + 1);
        }
        std::string       rows = body.substr(bar + 1);
        std::size_t       start = 0;
        while (true) {
          auto              semi = rows.find(';', start);
          std::string const part = rows.substr(start, semi == std::string::npos ? semi : semi - start);
          std::istringstream es(part);
          IntVector          v;
          std::string        tok;
          while (es >> tok) {
            if (tok.find_first_not_of("-+0123456789") != std::string::npos) {
              throw ParseError("bad integer '" + tok + "'", lineno, col + bar + 1 + start);
            }
            v.emplace_back(tok);
          }
          if (v.size() != rep.rank) {
            throw ParseError("entry vector must have " + std::to_string(rep.rank) + " components",
                             lineno, col + bar + 1 + start);
          }
          m.entries.push_back(v);
          if (semi == std::string::npos) break;
          start = semi + 1;
        }
        if (m.entries.size() != rep.size) {
          throw ParseError("expected " + std::to_string(rep.size) + " rows", lineno, col + bar + 1);
        }
        rep.images.emplace(name, std::move(m));
      } else {
        throw ParseError("expected 'monomial' or 'gen'", lineno, col);
      }
    }
    if (!header) throw ParseError("missing 'monomial' header", lineno + 1, 1);
    return rep;
  }

  struct RepCheck {
    enum class Kind { Ok, MissingGenerator, RelationFailure, Collision };
    Kind                     kind = Kind::Ok;
    std::string              detail;
    std::size_t              relation = 0;  // index, for RelationFailure
    std::pair<Word, Word>    words;         // offending pair
    std::size_t              scanned  = 0;  // normal forms compared
    std::size_t              scan_len = 0;

    bool ok() const noexcept {
      return kind == Kind::Ok;
    }
  };

  inline char const* to_string(RepCheck::Kind k) {
    switch (k) {
      case RepCheck::Kind::Ok: return "ok";
      case RepCheck::Kind::MissingGenerator: return "missing_generator";
      case RepCheck::Kind::RelationFailure: return "relation_failure";
      default: return "collision";
    }
  }

  // Relations must hold under the assignment, and distinct normal forms of
  // length <= scan_len must have distinct images.
  inline RepCheck verify_monomial_rep(Presentation const& p,
                                      RewriteSystem const& rs,
                                      MonomialRep const&   rep,
                                      std::size_t          scan_len) {
    RepCheck out;
    out.scan_len = scan_len;
    for (auto const& g : p.generators()) {
      if (!rep.images.count(g.name)) {
        out.kind   = RepCheck::Kind::MissingGenerator;
        out.detail = "no image for generator " + g.name;
        return out;
      }
    }
    for (std::size_t i = 0; i < p.relations().size(); ++i) {
      auto const& [l, r] = p.relations()[i];
      if (rep.image(p, l) != rep.image(p, r)) {
        out.kind     = RepCheck::Kind::RelationFailure;
        out.relation = i;
        out.words    = {l, r};
        out.detail   = "relation " + p.to_string(l) + " = " + p.to_string(r) + " fails";
        return out;
      }
    }
    std::map<MonomialMatrix, Word> seen;
    // Images are built incrementally along the enumeration, which extends
    // words by one letter at a time.
    std::map<Word, MonomialMatrix> cache;
    cache.emplace(Word{}, MonomialMatrix::identity(rep.size, rep.rank));
    std::vector<MonomialMatrix> gens;
    for (auto const& g : p.generators()) gens.push_back(rep.images.at(g.name));
    for (auto const& w : enumerate_elements(rs, scan_len).elements) {
      MonomialMatrix m;
      if (w.empty()) {
        m = cache.at(w);
      } else {
        Word prefix(w.begin(), w.end() - 1);
        m = cache.at(prefix) * gens[w.back()];
        cache.emplace(w, m);
      }
      ++out.scanned;
      auto [it, fresh] = seen.emplace(std::move(m), w);
      if (!fresh) {
        out.kind   = RepCheck::Kind::Collision;
        out.words  = {it->second, w};
        out.detail = "normal forms " + p.to_string(it->second) + " and " + p.to_string(w)
                     + " have the same image";
        return out;
      }
    }
    return out;
  }

}  // namespace workbench
