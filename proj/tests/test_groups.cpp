#include <catch_amalgamated.hpp>

#include <workbench/groups.hpp>

#include <random>

using namespace workbench;

namespace {

  ExtensionData infinite_dihedral() {
    auto e      = ExtensionData::trivial(1, cyclic_quotient(2));
    e.action[1] = IntMatrix::from_rows({{-1}});
    return e;
  }

  ExtensionData klein_bottle() {
    auto e        = ExtensionData::trivial(2, cyclic_quotient(2));
    e.action[1]   = IntMatrix::from_rows({{1, 0}, {0, -1}});
    e.cocycle[1][1] = from_ll({1, 0});
    return e;
  }

  // Z with N = 2Z: the coset generator squares to the generator of N.
  ExtensionData integers_over_even() {
    auto e          = ExtensionData::trivial(1, cyclic_quotient(2));
    e.cocycle[1][1] = from_ll({1});
    return e;
  }

  bool in_solution_set(AffineSolutionSet const& s, IntVector const& n) {
    if (!s.feasible()) return false;
    IntVector const d = n - *s.particular;
    if (s.homogeneous_basis.empty()) return is_zero(d);
    return lattice_coordinates(s.homogeneous_basis, d).has_value();
  }

  void for_box(std::size_t k, int r, std::function<void(IntVector const&)> const& f) {
    std::vector<long long> v(k, -r);
    while (true) {
      f(from_ll(v));
      std::size_t i = 0;
      while (i < k && v[i] == r) v[i++] = -r;
      if (i == k) return;
      ++v[i];
    }
  }

  std::vector<ExtensionData> zoo() {
    std::vector<ExtensionData> out;
    out.push_back(ExtensionData::trivial(2, cyclic_quotient(1)));
    out.push_back(ExtensionData::trivial(1, cyclic_quotient(2)));
    out.push_back(infinite_dihedral());
    out.push_back(klein_bottle());
    out.push_back(integers_over_even());
    {
      // p2-like: Z^2 with -I.
      auto e      = ExtensionData::trivial(2, cyclic_quotient(2));
      e.action[1] = IntMatrix::from_rows({{-1, 0}, {0, -1}});
      out.push_back(e);
    }
    {
      // Rotation of order 4 on Z^2.
      auto e = ExtensionData::trivial(2, cyclic_quotient(4));
      IntMatrix const r = IntMatrix::from_rows({{0, -1}, {1, 0}});
      e.action[1] = r;
      e.action[2] = r * r;
      e.action[3] = r * r * r;
      out.push_back(e);
    }
    {
      // Klein four acting by swap and by sign, no cocycle.
      auto e      = ExtensionData::trivial(2, klein_four());
      e.action[1] = IntMatrix::from_rows({{0, 1}, {1, 0}});
      e.action[2] = IntMatrix::from_rows({{-1, 0}, {0, -1}});
      e.action[3] = e.action[1] * e.action[2];
      out.push_back(e);
    }
    {
      // Swap on Z^2 with the square landing on (1,1).
      auto e          = ExtensionData::trivial(2, cyclic_quotient(2));
      e.action[1]     = IntMatrix::from_rows({{0, 1}, {1, 0}});
      e.cocycle[1][1] = from_ll({1, 1});
      out.push_back(e);
    }
    return out;
  }

}  // namespace

TEST_CASE("zoo extensions validate") {
  for (auto const& e : zoo()) {
    auto c = validate_extension(e);
    CHECK(c.ok);
    INFO(c.violation);
  }
}

TEST_CASE("validation reports violations") {
  auto e          = klein_bottle();
  e.cocycle[1][1] = from_ll({0, 1});
  auto c          = validate_extension(e);
  CHECK_FALSE(c.ok);
  CHECK(c.violation.find("cocycle identity") != std::string::npos);

  auto h      = ExtensionData::trivial(1, cyclic_quotient(3));
  h.action[1] = IntMatrix::from_rows({{-1}});
  h.action[2] = IntMatrix::from_rows({{-1}});
  CHECK(validate_extension(h).violation.find("homomorphism") != std::string::npos);

  auto g      = ExtensionData::trivial(1, cyclic_quotient(2));
  g.action[1] = IntMatrix::from_rows({{2}});
  CHECK(validate_extension(g).violation.find("GL(Z)") != std::string::npos);

  auto t          = ExtensionData::trivial(1, cyclic_quotient(2));
  t.quotient.mul[1][1] = 1;
  CHECK_FALSE(validate_extension(t).ok);
}

TEST_CASE("group axioms hold on random elements") {
  std::mt19937                       rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (auto const& e : zoo()) {
    auto rnd = [&] {
      IntVector v(e.rank);
      for (auto& x : v) x = coef(rng);
      return GroupElement{v, rng() % e.quotient.size()};
    };
    for (int i = 0; i < 60; ++i) {
      auto a = rnd(), b = rnd(), c = rnd();
      CHECK(e.multiply(e.multiply(a, b), c) == e.multiply(a, e.multiply(b, c)));
      CHECK(e.multiply(a, e.inverse(a)) == e.identity());
      CHECK(e.multiply(e.inverse(a), a) == e.identity());
      CHECK(e.multiply(a, e.identity()) == a);
    }
  }
}

TEST_CASE("torsion in coset agrees with a box scan") {
  for (auto const& e : zoo()) {
    for (std::size_t f = 0; f < e.quotient.size(); ++f) {
      std::size_t const m   = e.quotient.order(f);
      auto const        sol = torsion_in_coset(e, f, m);
      for_box(e.rank, 3, [&](IntVector const& n) {
        bool const brute = e.power({n, f}, m) == e.identity();
        CHECK(brute == in_solution_set(sol, n));
      });
    }
  }
}

TEST_CASE("torsion in coset needs f^m = e") {
  auto const e = infinite_dihedral();
  CHECK_FALSE(torsion_in_coset(e, 1, 3).feasible());
  CHECK(torsion_in_coset(e, 1, 4).feasible());
}

TEST_CASE("group hypotheses on classical groups") {
  SECTION("free abelian") {
    auto e = ExtensionData::trivial(3, cyclic_quotient(1));
    CHECK(delta_plus_trivial(e).holds);
    CHECK(dihedral_free(e).holds);
  }
  SECTION("Z x C2") {
    auto e = ExtensionData::trivial(1, cyclic_quotient(2));
    auto d = delta_plus_trivial(e);
    CHECK_FALSE(d.holds);
    REQUIRE(d.witness);
    CHECK(d.witness->coset == 1);
    CHECK(e.power(*d.witness, 2) == e.identity());
    CHECK(dihedral_free(e).holds);
  }
  SECTION("infinite dihedral") {
    auto e = infinite_dihedral();
    CHECK(delta_plus_trivial(e).holds);
    auto d = dihedral_free(e);
    CHECK_FALSE(d.holds);
    REQUIRE(d.witness);
    REQUIRE(d.axis);
    GroupElement const t = *d.witness;
    GroupElement const a{*d.axis, 0};
    CHECK(e.power(t, 2) == e.identity());
    CHECK(e.multiply(e.multiply(t, a), e.inverse(t)) == e.inverse(a));
  }
  SECTION("Klein bottle group is torsion free") {
    auto e = klein_bottle();
    CHECK(delta_plus_trivial(e).holds);
    CHECK(dihedral_free(e).holds);
  }
  SECTION("Z as an extension of C2 by 2Z") {
    auto e = integers_over_even();
    CHECK(delta_plus_trivial(e).holds);
    CHECK(dihedral_free(e).holds);
  }
  SECTION("-I on Z^2 has reflections with infinite-index normalizers") {
    auto e = zoo()[5];
    CHECK(delta_plus_trivial(e).holds);
    CHECK(dihedral_free(e).holds);
  }
  SECTION("swap with cocycle (1,1) is a coboundary") {
    // (n, f)^2 = (n1 + n2 + 1, n1 + n2 + 1) has solutions with n1 + n2 = -1.
    auto e = zoo()[8];
    auto d = dihedral_free(e);
    CHECK_FALSE(d.holds);
    REQUIRE(d.witness);
    CHECK(e.power(*d.witness, 2) == e.identity());
    CHECK(delta_plus_trivial(e).holds);
  }
  SECTION("swap without cocycle contains D_inf with a finite-index normalizer") {
    auto e      = ExtensionData::trivial(2, cyclic_quotient(2));
    e.action[1] = IntMatrix::from_rows({{0, 1}, {1, 0}});
    auto d      = dihedral_free(e);
    CHECK_FALSE(d.holds);
    REQUIRE(d.axis);
    CHECK(e.action[1] * *d.axis == -*d.axis);
  }
}

TEST_CASE("verdicts are invariant under basis change") {
  std::vector<IntMatrix> changes = {
      IntMatrix::from_rows({{1, 1}, {0, 1}}),
      IntMatrix::from_rows({{2, 1}, {1, 1}}),
      IntMatrix::from_rows({{0, 1}, {1, 0}}),
      IntMatrix::from_rows({{1, 0}, {3, -1}}),
  };
  for (auto const& e : zoo()) {
    if (e.rank != 2) continue;
    for (auto const& u : changes) {
      auto const g = change_basis(e, u);
      CHECK(validate_extension(g).ok);
      CHECK(delta_plus_trivial(g).holds == delta_plus_trivial(e).holds);
      CHECK(dihedral_free(g).holds == dihedral_free(e).holds);
    }
  }
}

TEST_CASE("extension files round trip") {
  for (auto const& e : zoo()) {
    auto const text = format_extension(e);
    auto const g    = parse_extension(text);
    CHECK(g.rank == e.rank);
    CHECK(g.quotient.names == e.quotient.names);
    CHECK(g.quotient.mul == e.quotient.mul);
    CHECK(g.action == e.action);
    CHECK(g.cocycle == e.cocycle);
  }
}

TEST_CASE("extension file errors") {
  auto error_line = [](std::string const& text) -> std::size_t {
    try {
      parse_extension(text);
    } catch (ParseError const& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(error_line("quotient: e f\n") == 1);
  CHECK(error_line("group G rank 1\nquotient: e f\ntable: e*e=e e*f=f f*e=f\n") == 3);
  CHECK(error_line("group G rank 1\nquotient: e f\ntable: e*e=e e*f=f f*e=f f*f=g\n") == 3);
  CHECK(error_line("group G rank 1\nquotient: e f\naction f: [[1,0]]\n") == 3);
  CHECK(error_line("group G rank 1\nquotient: e f\ncocycle f f: 1 2\n") == 3);
  CHECK(error_line("group G rank 1\nfrobnicate\n") == 2);
  CHECK(error_line("group G rank 1\nquotient: e f\ntable: e*e=e e*e=e\n") == 3);

  auto const ok = parse_extension(
      "group G rank 1   # infinite dihedral\n"
      "quotient: e t\n"
      "table: e*e=e e*t=t\n"
      "table: t*e=t t*t=e\n"
      "action t: [[-1]]\n");
  CHECK(ok.action[1] == IntMatrix::from_rows({{-1}}));
  CHECK(validate_extension(ok).ok);
}
