#pragma once

// Monoid presentations by monomial relations and their text format.
//
//   monoid <name>
//   generators: x1 x2 x3 x4
//   relations:
//     x1 x4 = x2 x3
//     x^2 = y^2 = z^2        # chains give consecutive pairs
//
// An optional `order: x1 x4 x2 x3` line after the generators sets the
// generator precedence used by the deglex term order (smallest first).
//
// Letters are whitespace separated; `x^k` expands to k copies of x.
// Comments run from `#` to the end of the line.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace workbench {

  using Letter = std::uint32_t;
  using Word   = std::vector<Letter>;

  struct Generator {
    Letter      id;
    std::string name;
  };

  // Shortlex ("deglex") order: length first, then lexicographic by id.
  inline bool deglex_less(Word const& a, Word const& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }

  // Deglex with respect to a generator precedence.  The default precedence
  // is declaration order.
  class TermOrder {
   public:
    TermOrder() = default;

    explicit TermOrder(std::size_t n) : _rank(n) {
      for (std::size_t i = 0; i < n; ++i) _rank[i] = static_cast<Letter>(i);
    }

    // precedence lists letters from smallest to largest.
    static TermOrder from_precedence(std::vector<Letter> const& precedence) {
      TermOrder o;
      o._rank.assign(precedence.size(), 0);
      std::vector<bool> seen(precedence.size(), false);
      for (std::size_t i = 0; i < precedence.size(); ++i) {
        Letter x = precedence[i];
        if (x >= precedence.size() || seen[x]) {
          throw std::invalid_argument("term order must list every generator exactly once");
        }
        seen[x]    = true;
        o._rank[x] = static_cast<Letter>(i);
      }
      return o;
    }

    bool less(Word const& a, Word const& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return _rank[a[i]] < _rank[b[i]];
      }
      return false;
    }

    std::vector<Letter> precedence() const {
      std::vector<Letter> p(_rank.size());
      for (std::size_t x = 0; x < _rank.size(); ++x) p[_rank[x]] = static_cast<Letter>(x);
      return p;
    }

    bool is_declaration_order() const {
      for (std::size_t i = 0; i < _rank.size(); ++i) {
        if (_rank[i] != i) return false;
      }
      return true;
    }

    std::size_t size() const noexcept {
      return _rank.size();
    }

   private:
    std::vector<Letter> _rank;
  };

  class ParseError : public std::runtime_error {
   public:
    ParseError(std::string const& msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column "
                             + std::to_string(column) + ": " + msg),
          _line(line),
          _column(column) {}

    std::size_t line() const noexcept {
      return _line;
    }
    std::size_t column() const noexcept {
      return _column;
    }

   private:
    std::size_t _line;
    std::size_t _column;
  };

  class Presentation {
   public:
    Presentation() = default;

    explicit Presentation(std::vector<std::string> const& names, std::string name = "")
        : _name(std::move(name)) {
      for (auto const& n : names) {
        add_generator(n);
      }
    }

    Letter add_generator(std::string const& n) {
      if (n.empty() || n == "1") {
        throw std::invalid_argument("generator name must be nonempty and not '1'");
      }
      for (char c : n) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
          throw std::invalid_argument("generator name contains whitespace: " + n);
        }
      }
      if (_index.count(n)) {
        throw std::invalid_argument("duplicate generator name: " + n);
      }
      auto id = static_cast<Letter>(_generators.size());
      _generators.push_back({id, n});
      _index.emplace(n, id);
      _order = TermOrder(_generators.size());
      return id;
    }

    void add_relation(Word lhs, Word rhs) {
      if (lhs.empty() || rhs.empty()) {
        throw std::invalid_argument("relation sides must be nonempty");
      }
      if (lhs == rhs) {
        throw std::invalid_argument("relation sides must be distinct words");
      }
      for (Word const* w : {&lhs, &rhs}) {
        for (Letter x : *w) {
          if (x >= _generators.size()) {
            throw std::invalid_argument("relation uses an undeclared generator");
          }
        }
      }
      _relations.emplace_back(std::move(lhs), std::move(rhs));
    }

    std::string const& name() const noexcept {
      return _name;
    }
    void set_name(std::string n) {
      _name = std::move(n);
    }

    std::size_t size() const noexcept {
      return _generators.size();
    }

    TermOrder const& order() const noexcept {
      return _order;
    }
    void set_order(TermOrder o) {
      if (o.size() != _generators.size()) {
        throw std::invalid_argument("term order size does not match generator count");
      }
      _order = std::move(o);
    }

    std::vector<Generator> const& generators() const noexcept {
      return _generators;
    }

    std::vector<std::pair<Word, Word>> const& relations() const noexcept {
      return _relations;
    }

    std::optional<Letter> letter(std::string const& n) const {
      auto it = _index.find(n);
      if (it == _index.end()) return std::nullopt;
      return it->second;
    }

    // Parses a whitespace separated word such as "x1 x1 x2" or "x1^2 x2".
    // The strings "" and "1" denote the empty word.
    Word parse_word(std::string_view text) const {
      std::istringstream in{std::string(text)};
      std::string        tok;
      Word               w;
      while (in >> tok) {
        if (tok == "1") continue;
        std::size_t reps = 1;
        auto        hat  = tok.find('^');
        if (hat != std::string::npos) {
          std::string const exp = tok.substr(hat + 1);
          if (exp.empty() || exp.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("bad exponent in '" + tok + "'");
          }
          reps = std::stoul(exp);
          tok  = tok.substr(0, hat);
        }
        auto x = letter(tok);
        if (!x) {
          throw std::invalid_argument("undeclared generator '" + tok + "'");
        }
        w.insert(w.end(), reps, *x);
      }
      return w;
    }

    std::string to_string(Word const& w) const {
      if (w.empty()) return "1";
      std::string s;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += _generators[w[i]].name;
      }
      return s;
    }

    // Homogeneous presentations have length-preserving relations; word length
    // is then an invariant of monoid elements.
    bool is_homogeneous() const {
      for (auto const& [l, r] : _relations) {
        if (l.size() != r.size()) return false;
      }
      return true;
    }

   private:
    std::string                        _name;
    std::vector<Generator>             _generators;
    std::map<std::string, Letter>      _index;
    std::vector<std::pair<Word, Word>> _relations;
    TermOrder                          _order;
  };

  namespace detail {
    inline std::string strip_comment(std::string const& line) {
      auto h = line.find('#');
      return h == std::string::npos ? line : line.substr(0, h);
    }

    inline std::size_t first_non_space(std::string const& s) {
      auto p = s.find_first_not_of(" \t\r");
      return p == std::string::npos ? s.size() : p;
    }

    inline std::string trim(std::string const& s) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return "";
      auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    }
  }  // namespace detail

  inline Presentation parse_presentation(std::string const& text) {
    Presentation       p;
    std::istringstream in(text);
    std::string        raw;
    std::size_t        lineno        = 0;
    bool               have_gens     = false;
    bool               in_relations  = false;

    while (std::getline(in, raw)) {
      ++lineno;
      std::string const line = detail::strip_comment(raw);
      std::string const body = detail::trim(line);
      std::size_t const col  = detail::first_non_space(line) + 1;
      if (body.empty()) continue;

      if (body.rfind("monoid", 0) == 0
          && (body.size() == 6 || body[6] == ' ' || body[6] == '\t')) {
        if (have_gens) {
          throw ParseError("'monoid' header must come first", lineno, col);
        }
        p.set_name(detail::trim(body.substr(6)));
        continue;
      }
      if (body.rfind("generators:", 0) == 0) {
        if (have_gens) {
          throw ParseError("generators declared twice", lineno, col);
        }
        std::istringstream gs(body.substr(11));
        std::string        g;
        std::size_t        offset = line.find("generators:") + 11;
        while (gs >> g) {
          std::size_t const gcol = line.find(g, offset) + 1;
          offset                 = gcol - 1 + g.size();
          if (g == "1" || g.find('^') != std::string::npos
              || g.find('=') != std::string::npos) {
            throw ParseError("invalid generator name '" + g + "'", lineno, gcol);
          }
          if (p.letter(g)) {
            throw ParseError("duplicate generator name '" + g + "'", lineno, gcol);
          }
          p.add_generator(g);
        }
        have_gens = true;
        continue;
      }
      if (body.rfind("order:", 0) == 0) {
        if (!have_gens || in_relations) {
          throw ParseError("'order:' must follow 'generators:'", lineno, col);
        }
        std::vector<Letter> prec;
        std::istringstream  os(body.substr(6));
        std::string         g;
        while (os >> g) {
          auto x = p.letter(g);
          if (!x) {
            throw ParseError("undeclared generator '" + g + "' in order",
                             lineno,
                             line.find(g, line.find("order:")) + 1);
          }
          prec.push_back(*x);
        }
        try {
          if (prec.size() != p.size()) {
            throw std::invalid_argument("term order must list every generator exactly once");
          }
          p.set_order(TermOrder::from_precedence(prec));
        } catch (std::invalid_argument const& e) {
          throw ParseError(e.what(), lineno, col);
        }
        continue;
      }
      if (body.rfind("relations:", 0) == 0) {
        if (!have_gens) {
          throw ParseError("relations before generators", lineno, col);
        }
        in_relations = true;
        if (!detail::trim(body.substr(10)).empty()) {
          throw ParseError("unexpected text after 'relations:'", lineno, col + 10);
        }
        continue;
      }
      if (!in_relations) {
        throw ParseError("expected 'monoid', 'generators:', 'order:' or 'relations:'", lineno, col);
      }

      // A relation chain w0 = w1 = ... = wk.
      std::vector<Word> sides;
      std::size_t       start = 0;
      while (true) {
        std::size_t const eq   = line.find('=', start);
        std::string const part = line.substr(start, eq == std::string::npos ? std::string::npos
                                                                             : eq - start);
        std::size_t const pcol = start + detail::first_non_space(part) + 1;
        if (detail::trim(part).empty()) {
          throw ParseError("empty relation side", lineno, pcol);
        }
        try {
          sides.push_back(p.parse_word(part));
        } catch (std::invalid_argument const& e) {
          // Locate the offending token for the column.
          std::istringstream ts(part);
          std::string        tok;
          std::size_t        tcol = pcol;
          std::size_t        off  = 0;
          while (ts >> tok) {
            std::size_t const at = part.find(tok, off);
            off                  = at + tok.size();
            std::string const nm = tok.substr(0, tok.find('^'));
            if (!p.letter(nm) && nm != "1") {
              tcol = start + at + 1;
              break;
            }
          }
          throw ParseError(e.what(), lineno, tcol);
        }
        if (sides.back().empty()) {
          throw ParseError("relation sides must be nonempty", lineno, pcol);
        }
        if (eq == std::string::npos) break;
        start = eq + 1;
      }
      if (sides.size() < 2) {
        throw ParseError("relation needs '='", lineno, col);
      }
      for (std::size_t i = 0; i + 1 < sides.size(); ++i) {
        if (sides[i] == sides[i + 1]) {
          throw ParseError("relation sides must be distinct words", lineno, col);
        }
        p.add_relation(sides[i], sides[i + 1]);
      }
    }
    if (!have_gens) {
      throw ParseError("missing 'generators:' line", lineno + 1, 1);
    }
    return p;
  }

  struct QuadraticCheck {
    bool                     quadratic = true;
    std::vector<std::string> diagnostics;
  };

  // True iff every relation is x_i x_j = x_k x_l and every length-two word
  // occurs on at most one relation side.
  inline QuadraticCheck is_quadratic_monomial(Presentation const& p) {
    QuadraticCheck              out;
    std::map<Word, std::size_t> seen;
    for (auto const& [l, r] : p.relations()) {
      for (Word const* w : {&l, &r}) {
        if (w->size() != 2) {
          out.quadratic = false;
          out.diagnostics.push_back("non-quadratic side: " + p.to_string(*w));
          continue;
        }
        if (++seen[*w] == 2) {
          out.quadratic = false;
          out.diagnostics.push_back("repeated word: " + p.to_string(*w));
        }
      }
    }
    return out;
  }

}  // namespace workbench
