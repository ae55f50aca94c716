#pragma once

// Crossed-system bundles: a directory holding
//
//   presentation.txt   monoid presentation (absent for purely affine bundles)
//   base.txt           affine base with a word for each generator
//   transversal.txt    one word per line, starting with 1
//   monomial_rep.txt   optional monomial representation
//   extension.txt      optional group extension (overrides the derived one
//                      for the group verbs)
//   witnesses.txt      optional named maximality witnesses
//                        witness case1: a1^-1 a3 | x1
//   embedding.txt      optional homomorphism into another bundle
//                        target example4-main
//                        p: x4 x1
//   expected.json      stored replay results

#include "crossed.hpp"

#include <filesystem>
#include <fstream>

namespace workbench {

  // A parse or load error together with the offending file.
  class InputError : public std::runtime_error {
   public:
    InputError(std::string const& file, std::string const& msg)
        : std::runtime_error(file + ": " + msg), _file(file) {}
    std::string const& file() const noexcept {
      return _file;
    }

   private:
    std::string _file;
  };

  inline std::string read_file(std::filesystem::path const& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError(p.string(), "cannot open file");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  struct Embedding {
    std::string                                target;
    std::vector<std::pair<std::string, std::string>> images;  // generator -> word text
  };

  struct Bundle {
    std::filesystem::path      dir;
    std::string                name;
    Presentation               presentation;
    AffineFile                 base;
    std::vector<std::string>   transversal;  // word texts
    std::optional<MonomialRep> rep;
    std::optional<ExtensionData> extension;
    std::vector<std::string>   witness_lines;
    std::optional<Embedding>   embedding;
    bool                       has_presentation = false;
  };

  struct Bounds {
    std::size_t max_rules = 200;
    std::size_t max_len   = 12;
    std::size_t check_len = 6;
    std::size_t scan_len  = 6;
    std::size_t radius    = 4;
    std::size_t box       = 2;
  };

  namespace detail {
    template <typename F>
    auto parse_in(std::filesystem::path const& p, F&& f) {
      std::string const text = read_file(p);
      try {
        return f(text);
      } catch (ParseError const& e) {
        throw InputError(p.string(), e.what());
      }
    }

    inline std::vector<std::string> nonempty_lines(std::string const& text) {
      std::vector<std::string> out;
      std::istringstream       in(text);
      std::string              raw;
      while (std::getline(in, raw)) {
        std::string const body = trim(strip_comment(raw));
        if (!body.empty()) out.push_back(body);
      }
      return out;
    }
  }  // namespace detail

  inline Embedding parse_embedding(std::string const& text) {
    Embedding   e;
    std::size_t lineno = 0;
    std::istringstream in(text);
    std::string        raw;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string const body = detail::trim(detail::strip_comment(raw));
      if (body.empty()) continue;
      if (body.rfind("target ", 0) == 0) {
        e.target = detail::trim(body.substr(7));
        continue;
      }
      auto colon = body.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'target <bundle>' or 'x: word'", lineno, 1);
      e.images.emplace_back(detail::trim(body.substr(0, colon)), detail::trim(body.substr(colon + 1)));
    }
    if (e.target.empty()) throw ParseError("missing 'target' line", lineno + 1, 1);
    return e;
  }

  inline Bundle load_bundle(std::filesystem::path const& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw InputError(dir.string(), "not a bundle directory");
    Bundle b;
    b.dir          = dir;
    b.name         = fs::absolute(dir).lexically_normal().filename().string();
    if (b.name.empty()) b.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
    if (fs::exists(dir / "presentation.txt")) {
      b.presentation = detail::parse_in(dir / "presentation.txt", parse_presentation);
      b.has_presentation = true;
    }
    if (fs::exists(dir / "base.txt")) b.base = detail::parse_in(dir / "base.txt", parse_affine);
    if (fs::exists(dir / "transversal.txt")) {
      b.transversal = detail::nonempty_lines(read_file(dir / "transversal.txt"));
    }
    if (fs::exists(dir / "monomial_rep.txt")) {
      b.rep = detail::parse_in(dir / "monomial_rep.txt", parse_monomial_rep);
    }
    if (fs::exists(dir / "extension.txt")) {
      b.extension = detail::parse_in(dir / "extension.txt", parse_extension);
    }
    if (fs::exists(dir / "witnesses.txt")) {
      b.witness_lines = detail::nonempty_lines(read_file(dir / "witnesses.txt"));
    }
    if (fs::exists(dir / "embedding.txt")) {
      b.embedding = detail::parse_in(dir / "embedding.txt", parse_embedding);
    }
    return b;
  }

  inline Word parse_word_in(Presentation const& p, std::string const& text, std::string const& file) {
    if (detail::trim(text) == "1") return {};
    try {
      return p.parse_word(text);
    } catch (ParseError const& e) {
      throw InputError(file, e.what());
    } catch (std::exception const& e) {
      throw InputError(file, e.what());
    }
  }

  inline RewriteSystem complete_or_throw(Presentation const& p, Bounds const& bounds) {
    auto r = complete(p, bounds.max_rules, bounds.max_len);
    if (auto* inc = std::get_if<Incomplete>(&r)) {
      throw CrossedError(CrossedError::Kind::Structure,
                         "completion did not finish within --max-rules "
                             + std::to_string(bounds.max_rules));
    }
    return std::get<RewriteSystem>(r);
  }

  inline CrossedSystem crossed_system_of(Bundle const& b, RewriteSystem const& rs,
                                         Bounds const& bounds) {
    auto const base_file = (b.dir / "base.txt").string();
    if (b.base.monoid.size() == 0) throw InputError(base_file, "missing base");
    std::vector<Word> words;
    for (std::size_t j = 0; j < b.base.words.size(); ++j) {
      if (b.base.words[j].empty()) {
        throw InputError(base_file, "no word given for generator " + b.base.monoid.names()[j]);
      }
      words.push_back(parse_word_in(b.presentation, b.base.words[j], base_file));
    }
    std::vector<Word> trans;
    for (auto const& t : b.transversal) {
      trans.push_back(parse_word_in(b.presentation, t, (b.dir / "transversal.txt").string()));
    }
    if (trans.empty()) trans.push_back({});
    return extract_crossed_system(b.presentation, rs, b.base.monoid, words, trans,
                                  bounds.check_len);
  }

  // "witness <name>: a1^-1 a3 | x1 x2" with an optional "; then x3 x1"
  inline std::vector<NamedWitness> parse_witnesses(Bundle const& b, CrossedSystem const& cs) {
    std::vector<NamedWitness> out;
    auto const                file = (b.dir / "witnesses.txt").string();
    for (auto const& line : b.witness_lines) {
      if (line.rfind("witness ", 0) != 0) throw InputError(file, "expected 'witness <name>: ...'");
      auto colon = line.find(':');
      auto bar   = line.find('|');
      if (colon == std::string::npos || bar == std::string::npos || bar < colon) {
        throw InputError(file, "expected 'witness <name>: <base monomial> | <word>'");
      }
      NamedWitness w;
      w.name = detail::trim(line.substr(8, colon - 8));
      w.x    = zero_vector(cs.base.group_rank());
      std::istringstream ts(line.substr(colon + 1, bar - colon - 1));
      std::string        tok;
      while (ts >> tok) {
        auto        caret = tok.find('^');
        std::string name  = tok.substr(0, caret);
        long long   e     = 1;
        if (caret != std::string::npos) {
          try {
            e = std::stoll(tok.substr(caret + 1));
          } catch (...) {
            throw InputError(file, "bad exponent in '" + tok + "'");
          }
        }
        auto idx = cs.base.index(name);
        if (!idx) throw InputError(file, "unknown base generator '" + name + "'");
        w.x += Integer(e) * cs.base.generator_coordinates()[*idx];
      }
      std::string rest = line.substr(bar + 1);
      auto        semi = rest.find(';');
      if (semi != std::string::npos) {
        std::string const tail = detail::trim(rest.substr(semi + 1));
        if (tail.rfind("then ", 0) != 0) throw InputError(file, "expected '; then <word>'");
        w.then = parse_word_in(cs.presentation, tail.substr(5), file);
        rest   = rest.substr(0, semi);
      }
      w.word = parse_word_in(cs.presentation, rest, file);
      out.push_back(std::move(w));
    }
    return out;
  }

  struct EmbeddingCheck {
    std::string                target;
    bool                       relations_hold = false;
    std::optional<std::size_t> failing_relation;
    bool                       injective = false;  // on normal forms up to scan_len
    std::pair<Word, Word>      collision;
    std::size_t                scanned  = 0;
    std::size_t                scan_len = 0;

    bool ok() const noexcept {
      return relations_hold && injective;
    }
  };

  // The target bundle is looked up next to the source bundle.
  inline EmbeddingCheck check_embedding(Bundle const& b, RewriteSystem const& rs,
                                        Bounds const& bounds) {
    auto const      file = (b.dir / "embedding.txt").string();
    auto const&     em   = *b.embedding;
    EmbeddingCheck  out;
    out.target   = em.target;
    out.scan_len = bounds.scan_len;
    Bundle const        tb = load_bundle(b.dir.parent_path() / em.target);
    if (!tb.has_presentation) throw InputError(file, "target bundle has no presentation");
    RewriteSystem const trs = complete_or_throw(tb.presentation, bounds);

    std::vector<Word> image(b.presentation.size());
    std::vector<bool> given(b.presentation.size(), false);
    for (auto const& [g, text] : em.images) {
      auto x = b.presentation.letter(g);
      if (!x) throw InputError(file, "unknown generator '" + g + "'");
      image[*x] = parse_word_in(tb.presentation, text, file);
      given[*x] = true;
    }
    for (std::size_t x = 0; x < given.size(); ++x) {
      if (!given[x]) {
        throw InputError(file, "no image for generator " + b.presentation.generators()[x].name);
      }
    }
    auto map = [&](Word const& w) {
      Word out;
      for (Letter x : w) out.insert(out.end(), image[x].begin(), image[x].end());
      return trs.rewrite(out);
    };
    out.relations_hold = true;
    for (std::size_t i = 0; i < b.presentation.relations().size(); ++i) {
      auto const& [l, r] = b.presentation.relations()[i];
      if (map(l) != map(r)) {
        out.relations_hold   = false;
        out.failing_relation = i;
        return out;
      }
    }
    std::map<Word, Word> seen;
    out.injective = true;
    for (auto const& w : enumerate_elements(rs, bounds.scan_len).elements) {
      ++out.scanned;
      auto [it, fresh] = seen.emplace(map(w), w);
      if (!fresh) {
        out.injective = false;
        out.collision = {it->second, w};
        return out;
      }
    }
    return out;
  }

}  // namespace workbench
