#pragma once

// Knuth-Bendix completion of monomial presentations under deglex, normal
// forms, and element enumeration.

#include "presentation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <variant>

namespace workbench {

  struct Rule {
    Word lhs;
    Word rhs;

    bool operator==(Rule const&) const = default;
  };

  class RewriteSystem {
   public:
    RewriteSystem() = default;

    RewriteSystem(std::size_t alphabet, std::vector<Rule> rules, bool confluent)
        : RewriteSystem(TermOrder(alphabet), std::move(rules), confluent) {}

    RewriteSystem(TermOrder order, std::vector<Rule> rules, bool confluent)
        : _alphabet(order.size()),
          _order(std::move(order)),
          _rules(std::move(rules)),
          _confluent(confluent) {
      for (auto const& r : _rules) {
        if (!_order.less(r.rhs, r.lhs)) {
          throw std::invalid_argument("RewriteSystem: rule is not deglex decreasing");
        }
      }
      index();
    }

    std::size_t alphabet() const noexcept {
      return _alphabet;
    }
    std::vector<Rule> const& rules() const noexcept {
      return _rules;
    }
    bool confluent() const noexcept {
      return _confluent;
    }
    TermOrder const& order() const noexcept {
      return _order;
    }

    // Rewrites to an irreducible word.  Stack based: letters are pushed one at
    // a time and any left-hand side appearing as a suffix is replaced.
    Word rewrite(Word const& w) const {
      Word              out;
      std::deque<Letter> in(w.begin(), w.end());
      out.reserve(w.size());
      while (!in.empty()) {
        out.push_back(in.front());
        in.pop_front();
        for (std::size_t ri : _by_last[out.back()]) {
          Rule const& r = _rules[ri];
          if (r.lhs.size() <= out.size()
              && std::equal(r.lhs.begin(), r.lhs.end(), out.end() - r.lhs.size())) {
            out.resize(out.size() - r.lhs.size());
            in.insert(in.begin(), r.rhs.begin(), r.rhs.end());
            break;
          }
        }
      }
      return out;
    }

    // All (rule, position) pairs where a left-hand side occurs in w.
    std::vector<std::pair<std::size_t, std::size_t>> redexes(Word const& w) const {
      std::vector<std::pair<std::size_t, std::size_t>> out;
      for (std::size_t ri = 0; ri < _rules.size(); ++ri) {
        Word const& l = _rules[ri].lhs;
        for (std::size_t p = 0; p + l.size() <= w.size(); ++p) {
          if (std::equal(l.begin(), l.end(), w.begin() + p)) {
            out.emplace_back(ri, p);
          }
        }
      }
      return out;
    }

    Word apply(Word const& w, std::size_t rule, std::size_t pos) const {
      Rule const& r = _rules[rule];
      Word        out(w.begin(), w.begin() + pos);
      out.insert(out.end(), r.rhs.begin(), r.rhs.end());
      out.insert(out.end(), w.begin() + pos + r.lhs.size(), w.end());
      return out;
    }

    bool is_irreducible(Word const& w) const {
      for (auto const& r : _rules) {
        if (r.lhs.size() <= w.size()
            && std::search(w.begin(), w.end(), r.lhs.begin(), r.lhs.end()) != w.end()) {
          return false;
        }
      }
      return true;
    }

   private:
    void index() {
      _by_last.assign(_alphabet, {});
      for (std::size_t i = 0; i < _rules.size(); ++i) {
        _by_last[_rules[i].lhs.back()].push_back(i);
      }
    }

    std::size_t                           _alphabet = 0;
    TermOrder                             _order;
    std::vector<Rule>                     _rules;
    bool                                  _confluent = false;
    std::vector<std::vector<std::size_t>> _by_last;
  };

  struct Incomplete {
    std::vector<Rule>         partial_rules;
    std::pair<Word, Word>     unresolved;
    std::string               reason;
  };

  using CompletionResult = std::variant<RewriteSystem, Incomplete>;

  namespace detail {
    inline Rule orient(TermOrder const& o, Word a, Word b) {
      if (o.less(a, b)) std::swap(a, b);
      return {std::move(a), std::move(b)};
    }

    inline bool contains(Word const& hay, Word const& needle) {
      return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
    }

    inline bool rule_less(TermOrder const& o, Rule const& a, Rule const& b) {
      if (a.lhs != b.lhs) return o.less(a.lhs, b.lhs);
      return o.less(a.rhs, b.rhs);
    }

    // Critical pairs from overlaps of lhs(a) suffix with lhs(b) prefix.
    inline void overlaps(Rule const&                         a,
                         Rule const&                         b,
                         std::vector<std::pair<Word, Word>>& out) {
      for (std::size_t k = 1; k < a.lhs.size() && k < b.lhs.size() + 1; ++k) {
        if (k > b.lhs.size()) break;
        if (!std::equal(a.lhs.end() - k, a.lhs.end(), b.lhs.begin())) continue;
        if (k == b.lhs.size()) continue;  // b inside a: excluded by interreduction
        Word left(a.rhs);
        left.insert(left.end(), b.lhs.begin() + k, b.lhs.end());
        Word right(a.lhs.begin(), a.lhs.end() - k);
        right.insert(right.end(), b.rhs.begin(), b.rhs.end());
        out.emplace_back(std::move(left), std::move(right));
      }
    }
  }  // namespace detail

  // Knuth-Bendix completion.  Bounds: at most max_rules live rules and no
  // rule with a left-hand side longer than max_len; hitting either bound
  // yields Incomplete with the pair being processed.
  inline CompletionResult complete(Presentation const& p,
                                   std::size_t         max_rules,
                                   std::size_t         max_len) {
    if (max_rules < 1 || max_len < 1) {
      throw std::invalid_argument("complete: bounds must be positive");
    }
    TermOrder const& ord = p.order();

    // Rules carry ids so processed pairs are remembered across rounds.
    struct Live {
      std::size_t id;
      Rule        rule;
    };
    std::vector<Live>                             live;
    std::size_t                                   next_id = 0;
    std::set<std::pair<std::size_t, std::size_t>> done;

    auto reduce = [&](Word const& w) {
      std::vector<Rule> rs;
      rs.reserve(live.size());
      for (auto const& l : live) rs.push_back(l.rule);
      return RewriteSystem(ord, std::move(rs), false).rewrite(w);
    };

    auto snapshot = [&] {
      std::vector<Rule> rs;
      for (auto const& l : live) rs.push_back(l.rule);
      std::sort(rs.begin(), rs.end(), [&](Rule const& a, Rule const& b) {
        return detail::rule_less(ord, a, b);
      });
      return rs;
    };

    std::vector<std::pair<Word, Word>> pending(p.relations().begin(), p.relations().end());

    while (true) {
      // Absorb pending equations, keeping the live set interreduced.
      while (!pending.empty()) {
        std::sort(pending.begin(), pending.end(), [&](auto const& x, auto const& y) {
          return detail::rule_less(ord,
                                   detail::orient(ord, y.first, y.second),
                                   detail::orient(ord, x.first, x.second));
        });
        auto eq = std::move(pending.back());
        pending.pop_back();
        Word a = reduce(eq.first), b = reduce(eq.second);
        if (a == b) continue;
        Rule r = detail::orient(ord, std::move(a), std::move(b));
        if (r.lhs.size() > max_len) {
          return Incomplete{snapshot(), eq, "rule length bound exceeded"};
        }
        // Rules whose lhs contains the new lhs are removed and re-queued;
        // right-hand sides are re-reduced below.
        std::vector<Live> kept;
        for (auto& l : live) {
          if (detail::contains(l.rule.lhs, r.lhs)) {
            pending.emplace_back(l.rule.lhs, l.rule.rhs);
          } else {
            kept.push_back(std::move(l));
          }
        }
        live = std::move(kept);
        live.push_back({next_id++, r});
        for (auto& l : live) {
          Word const rhs = reduce(l.rule.rhs);
          if (rhs != l.rule.rhs) {
            l.rule.rhs = rhs;
          }
        }
        if (live.size() > max_rules) {
          return Incomplete{snapshot(), eq, "rule count bound exceeded"};
        }
      }

      // Critical pairs among live rules not yet examined.
      std::vector<std::pair<Word, Word>> cps;
      for (auto const& a : live) {
        for (auto const& b : live) {
          if (!done.emplace(a.id, b.id).second) continue;
          detail::overlaps(a.rule, b.rule, cps);
        }
      }
      for (auto& cp : cps) {
        Word x = reduce(cp.first), y = reduce(cp.second);
        if (x != y) pending.emplace_back(std::move(x), std::move(y));
      }
      if (pending.empty()) break;
    }
    return RewriteSystem(ord, snapshot(), true);
  }

  inline Word normal_form(RewriteSystem const& rs, Word const& w) {
    if (!rs.confluent()) {
      throw std::invalid_argument("normal_form: rewriting system is not confluent");
    }
    return rs.rewrite(w);
  }

  struct Enumeration {
    std::vector<Word>        elements;  // sorted by the system's term order
    std::vector<std::size_t> counts;    // counts[l] = number of length-l elements
  };

  // All irreducible words of length <= max_len.  Prefixes of irreducible words
  // are irreducible, so extension level by level is exhaustive.
  inline Enumeration enumerate_elements(RewriteSystem const& rs, std::size_t max_len) {
    if (!rs.confluent()) {
      throw std::invalid_argument("enumerate_elements: rewriting system is not confluent");
    }
    Enumeration       out;
    std::vector<Word> level{Word{}};
    for (std::size_t len = 0; len <= max_len; ++len) {
      out.counts.push_back(level.size());
      out.elements.insert(out.elements.end(), level.begin(), level.end());
      if (len == max_len) break;
      std::vector<Word> next;
      std::vector<Letter> const prec = rs.order().precedence();
      for (auto const& w : level) {
        for (Letter x : prec) {
          Word v(w);
          v.push_back(x);
          // Only suffixes ending at the new letter can be new redexes.
          bool red = false;
          for (auto const& r : rs.rules()) {
            if (r.lhs.size() <= v.size()
                && std::equal(r.lhs.begin(), r.lhs.end(), v.end() - r.lhs.size())) {
              red = true;
              break;
            }
          }
          if (!red) next.push_back(std::move(v));
        }
      }
      level = std::move(next);
    }
    return out;
  }

}  // namespace workbench
