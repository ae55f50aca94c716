#include "workbench/rewriting.hpp"

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <random>

using namespace workbench;

namespace {
  Presentation example4() {
    return parse_presentation(oracle::bundle("example4-main", "presentation.txt"));
  }

  RewriteSystem completed(Presentation const& p) {
    auto r = complete(p, 200, 12);
    REQUIRE(std::holds_alternative<RewriteSystem>(r));
    return std::get<RewriteSystem>(r);
  }

  Word digits(std::string const& s) {
    Word w;
    for (char c : s) w.push_back(static_cast<Letter>(c - '1'));
    return w;
  }
}  // namespace

TEST_CASE("commuting pair completes to one rule", "[rewriting]") {
  auto p  = parse_presentation("generators: x y\nrelations:\n y x = x y\n");
  auto rs = completed(p);
  REQUIRE(rs.rules().size() == 1);
  CHECK(rs.rules()[0].lhs == Word{1, 0});
  CHECK(rs.rules()[0].rhs == Word{0, 1});
  // Growth of the free commutative monoid on two letters: l + 1.
  auto e = enumerate_elements(rs, 6);
  for (std::size_t l = 0; l <= 6; ++l) CHECK(e.counts[l] == l + 1);
}

TEST_CASE("free monoid growth", "[rewriting]") {
  auto rs = completed(parse_presentation("generators: x y\nrelations:\n"));
  auto e  = enumerate_elements(rs, 3);
  CHECK(e.counts == std::vector<std::size_t>{1, 2, 4, 8});
  CHECK(e.elements.size() == 15);
  CHECK(normal_form(rs, {}).empty());
}

TEST_CASE("three commuting letters match multiset counts", "[rewriting]") {
  auto rs = completed(parse_presentation(
      "generators: x y z\nrelations:\n y x = x y\n z x = x z\n z y = y z\n"));
  auto e = enumerate_elements(rs, 5);
  for (std::size_t l = 0; l <= 5; ++l) {
    // multisets of size l from 3 letters
    CHECK(e.counts[l] == (l + 1) * (l + 2) / 2);
  }
}

TEST_CASE("main example: displayed length-3 classes", "[rewriting]") {
  auto p  = example4();
  auto rs = completed(p);
  CHECK(rs.rules().size() == 8);
  std::vector<std::string> const classes{
      "112=134=244",         "113=124=344",         "114=123=343=321=411",
      "221=243=133",         "224=213=433",         "223=214=434=412=322",
      "331=342=122",         "334=312=422",         "332=341=121=143=233",
      "442=431=211",         "443=421=311",         "441=432=212=234=144",
      "131=142=232=241",     "141=132=242=231",     "313=423=414=324",
      "323=314=424=413"};
  std::set<Word> reps;
  for (auto const& cls : classes) {
    std::istringstream in(cls);
    std::string        w;
    std::set<Word>     nfs;
    while (std::getline(in, w, '=')) nfs.insert(normal_form(rs, digits(w)));
    INFO(cls);
    CHECK(nfs.size() == 1);
    reps.insert(*nfs.begin());
  }
  CHECK(reps.size() == classes.size());
  CHECK(normal_form(rs, digits("321")) == normal_form(rs, digits("411")));
  CHECK(normal_form(rs, digits("332")) == normal_form(rs, digits("121")));
}

TEST_CASE("main example: normal forms agree with the congruence oracle", "[rewriting]") {
  auto p  = example4();
  auto rs = completed(p);
  for (std::size_t len = 0; len <= 4; ++len) {
    auto                        cls = oracle::thue_classes(p, len);
    std::map<std::size_t, Word> nf_of_class;
    std::set<Word>              nfs;
    for (auto const& [w, c] : cls) {
      Word const nf = normal_form(rs, w);
      nfs.insert(nf);
      auto [it, fresh] = nf_of_class.emplace(c, nf);
      REQUIRE(it->second == nf);  // one class, one normal form
      REQUIRE(normal_form(rs, nf) == nf);
      REQUIRE(!rs.order().less(w, nf));
    }
    REQUIRE(nfs.size() == nf_of_class.size());  // distinct classes stay distinct
    auto e = enumerate_elements(rs, len);
    CHECK(e.counts[len] == nf_of_class.size());
  }
}

TEST_CASE("main example growth and enumeration order", "[rewriting]") {
  auto rs = completed(example4());
  auto e  = enumerate_elements(rs, 6);
  CHECK(e.counts == std::vector<std::size_t>{1, 4, 10, 20, 35, 56, 84});
  for (std::size_t i = 1; i < e.elements.size(); ++i) {
    REQUIRE(rs.order().less(e.elements[i - 1], e.elements[i]));
  }
  for (auto const& w : e.elements) REQUIRE(rs.is_irreducible(w));
}

TEST_CASE("randomised rewriting strategies reach the same normal form", "[rewriting]") {
  std::mt19937 rng(3);
  for (auto const& text :
       {oracle::bundle("example4-main", "presentation.txt"),
        std::string("generators: x y z\nrelations:\n x^2 = y^2 = z^2\n z x = y z\n z y = x z\n")}) {
    auto p  = parse_presentation(text);
    auto rs = completed(p);
    for (int trial = 0; trial < 300; ++trial) {
      Word w(rng() % 9);
      for (auto& x : w) x = rng() % p.size();
      Word const nf = normal_form(rs, w);
      Word       v  = w;
      while (true) {
        auto red = rs.redexes(v);
        if (red.empty()) break;
        auto [ri, pos] = red[rng() % red.size()];
        v              = rs.apply(v, ri, pos);
      }
      REQUIRE(v == nf);
    }
  }
}

TEST_CASE("completion bounds yield Incomplete", "[rewriting]") {
  auto p = parse_presentation(
      "generators: x1 x2 x3 x4\nrelations:\n x1 x4 = x2 x3\n x1 x3 = x2 x4\n x3 x1 = x4 x2\n"
      " x3 x2 = x4 x1\n x1 x2 = x3 x4\n x2 x1 = x4 x3\n");
  auto r = complete(p, 100, 8);
  REQUIRE(std::holds_alternative<Incomplete>(r));
  auto const& inc = std::get<Incomplete>(r);
  CHECK(!inc.partial_rules.empty());
  CHECK(!inc.reason.empty());
  CHECK_THROWS(complete(p, 0, 3));
  auto small = complete(example4(), 3, 10);
  CHECK(std::holds_alternative<Incomplete>(small));
}

TEST_CASE("non-confluent systems refuse normal forms", "[rewriting]") {
  RewriteSystem rs(2, {{{1, 0}, {0, 1}}}, false);
  CHECK_THROWS(normal_form(rs, {1, 0}));
  CHECK_THROWS(RewriteSystem(2, {{{0}, {1}}}, true));
}
