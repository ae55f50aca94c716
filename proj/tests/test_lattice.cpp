#include "workbench/lattice.hpp"
#include "workbench/simplex.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace workbench;

namespace {
  IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix                          m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
  }

  bool is_smith(SmithForm const& s, IntMatrix const& m) {
    if (s.left * m * s.right != s.diagonal) return false;
    if (!is_unimodular(s.left) || !is_unimodular(s.right)) return false;
    for (std::size_t i = 0; i < s.diagonal.rows(); ++i)
      for (std::size_t j = 0; j < s.diagonal.cols(); ++j)
        if (i != j && s.diagonal(i, j) != 0) return false;
    for (std::size_t i = 0; i < s.rank; ++i) {
      if (s.invariant(i) <= 0) return false;
      if (i + 1 < s.rank && s.invariant(i + 1) % s.invariant(i) != 0) return false;
    }
    for (std::size_t i = s.rank; i < std::min(m.rows(), m.cols()); ++i)
      if (s.invariant(i) != 0) return false;
    return true;
  }
}  // namespace

TEST_CASE("smith form of diag(2,3)", "[lattice]") {
  auto m = IntMatrix::from_rows({{2, 0}, {0, 3}});
  auto s = smith_form(m);
  REQUIRE(is_smith(s, m));
  CHECK(s.invariant(0) == 1);
  CHECK(s.invariant(1) == 6);
}

TEST_CASE("identity and zero", "[lattice]") {
  auto id = IntMatrix::identity(3);
  auto f  = canonical_forms(id);
  CHECK(f.smith.diagonal == id);
  CHECK(f.hermite.hermite == id);
  IntMatrix z(2, 3);
  auto      g = canonical_forms(z);
  CHECK(g.smith.diagonal.is_zero());
  CHECK(g.hermite.hermite.is_zero());
  CHECK(g.smith.rank == 0);
}

TEST_CASE("smith and hermite invariants on random matrices", "[lattice]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    auto        m = random_matrix(rng, r, c, -6, 6);
    auto        s = smith_form(m);
    REQUIRE(is_smith(s, m));
    REQUIRE(s.rank == rank(m));

    auto h = hermite_form(m);
    REQUIRE(m * h.transform == h.hermite);
    REQUIRE(is_unimodular(h.transform));
    REQUIRE(h.rank == rank(m));
    // Pivot rows strictly increase, pivots positive, reduced to the left.
    std::size_t prev = 0;
    for (std::size_t j = 0; j < h.rank; ++j) {
      std::size_t p = 0;
      while (h.hermite(p, j) == 0) ++p;
      if (j > 0) REQUIRE(p > prev);
      REQUIRE(h.hermite(p, j) > 0);
      for (std::size_t k = 0; k < j; ++k) {
        REQUIRE(h.hermite(p, k) >= 0);
        REQUIRE(h.hermite(p, k) < h.hermite(p, j));
      }
      prev = p;
    }
    for (std::size_t j = h.rank; j < c; ++j) REQUIRE(is_zero(h.hermite.column(j)));
  }
}

TEST_CASE("solve_integer: parity and trivial systems", "[lattice]") {
  auto two = IntMatrix::from_rows({{2}});
  CHECK_FALSE(solve_integer(two, {1}).feasible());
  IntMatrix z(2, 3);
  auto      s = solve_integer(z, zero_vector(2));
  REQUIRE(s.feasible());
  CHECK(is_zero(*s.particular));
  CHECK(s.homogeneous_basis.size() == 3);
  CHECK(rank(s.homogeneous_basis, 3) == 3);
}

TEST_CASE("solve_integer agrees with a box scan", "[lattice]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    auto        a = random_matrix(rng, r, c, -3, 3);
    IntVector   x0(c);
    for (auto& e : x0) e = int(rng() % 5) - 2;
    IntVector b = a * x0;
    if (trial % 3 == 0) b[0] += 1;  // often infeasible
    auto sol = solve_integer(a, b);
    if (sol.feasible()) {
      REQUIRE(a * *sol.particular == b);
      for (auto const& h : sol.homogeneous_basis) REQUIRE(is_zero(a * h));
      REQUIRE(rank(sol.homogeneous_basis, c) == sol.homogeneous_basis.size());
      REQUIRE(sol.homogeneous_basis.size() == c - rank(a));
    }
    // Every small solution lies in the returned coset.
    IntVector x = zero_vector(c);
    std::function<void(std::size_t)> scan = [&](std::size_t k) {
      if (k == c) {
        if (a * x != b) return;
        REQUIRE(sol.feasible());
        IntVector diff = x - *sol.particular;
        REQUIRE(lattice_coordinates(sol.homogeneous_basis, diff).has_value());
        return;
      }
      for (int v = -3; v <= 3; ++v) {
        x[k] = v;
        scan(k + 1);
      }
    };
    scan(0);
  }
}

TEST_CASE("eigen lattices and image rank", "[lattice]") {
  auto minus = IntMatrix::from_rows({{-1}});
  CHECK(eigen_lattice(minus, -1).size() == 1);
  CHECK(eigen_lattice(IntMatrix::identity(3), -1).empty());
  CHECK(eigen_lattice(IntMatrix::identity(3), 1).size() == 3);
  // Columns 2a3-a1-a2 and 2a5-a1-a2 in the basis a1,a2,a3,a5.
  auto m = IntMatrix::from_rows({{-1, -1}, {-1, -1}, {2, 0}, {0, 2}});
  CHECK(image_rank(m) == 2);
}

TEST_CASE("unimodular inverse and determinant", "[lattice]") {
  auto m = IntMatrix::from_rows({{2, 1}, {1, 1}});
  CHECK(determinant(m) == 1);
  CHECK(unimodular_inverse(m) * m == IntMatrix::identity(2));
  CHECK(determinant(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}})) == -3);
  CHECK_THROWS(unimodular_inverse(IntMatrix::from_rows({{2, 0}, {0, 1}})));
}

TEST_CASE("lattice coordinates round trip", "[lattice]") {
  std::vector<IntVector> gens{{2, 0, 1}, {0, 2, 1}, {2, 2, 2}};
  auto                   b = lattice_basis(gens, 3);
  CHECK(b.size() == 2);
  for (auto const& g : gens) {
    auto c = lattice_coordinates(b, g);
    REQUIRE(c);
    CHECK(from_coordinates(b, *c, 3) == g);
  }
  CHECK_FALSE(lattice_coordinates(b, IntVector{1, 0, 0}));
}

TEST_CASE("rational feasibility", "[lattice]") {
  auto a = IntMatrix::from_rows({{1, -1, 0}, {0, 1, -1}});
  auto x = nonnegative_solution(a, {1, 1});
  REQUIRE(x);
  CHECK((*x)[0] - (*x)[1] == 1);
  CHECK(!nonnegative_solution(IntMatrix::from_rows({{1, 1}}), {-1}));
  auto y = positive_relation({{1, 0}, {-1, 1}, {0, -1}}, 2);
  REQUIRE(y);
  CHECK((*y)[0] >= 1);
  CHECK((*y)[0] == (*y)[1]);
  CHECK(!positive_relation({{1, 0}, {0, 1}}, 2));
}
