#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "meanfield/errors.hpp"
#include "meanfield/fock_basis.hpp"
#include "meanfield/fock_state.hpp"

using namespace meanfield;

namespace {

std::uint64_t choose(int a, int b) {
  if (b < 0 || b > a) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
  return r;
}

}  // namespace

TEST_CASE("sector layout matches stars and bars counts") {
  for (int m : {2, 3, 4, 6}) {
    for (int nmax : {0, 1, 2, 5, 9}) {
      auto b = make_basis(m, nmax);
      std::int64_t expect_dim = 0;
      for (int n = 0; n <= nmax; ++n) {
        CHECK(b->sector_offset(n) == expect_dim);
        CHECK(b->sector_dim(n) == static_cast<std::int64_t>(choose(n + m - 1, m - 1)));
        expect_dim += b->sector_dim(n);
      }
      CHECK(b->dim() == expect_dim);
      CHECK(b->dim() == static_cast<std::int64_t>(choose(nmax + m, m)));
    }
  }
}

TEST_CASE("every state round-trips through index_of") {
  for (int m : {2, 3, 4}) {
    for (int nmax : {0, 1, 3, 6}) {
      auto b = make_basis(m, nmax);
      for (std::int64_t i = 0; i < b->dim(); ++i) {
        const std::uint8_t* occ = b->occ(i);
        int total = 0;
        for (int j = 0; j < m; ++j) total += occ[j];
        CHECK(b->sector_of(i) == total);
        CHECK(b->index_of(occ) == i);
      }
    }
  }
}

TEST_CASE("sectors are contiguous and lexicographically ascending inside") {
  auto b = make_basis(4, 7);
  for (std::int64_t i = 1; i < b->dim(); ++i) {
    const int sa = b->sector_of(i - 1);
    const int sb = b->sector_of(i);
    REQUIRE(sb >= sa);
    if (sa == sb) {
      // lexicographic comparison of consecutive occupation vectors
      const std::uint8_t* u = b->occ(i - 1);
      const std::uint8_t* v = b->occ(i);
      bool less = false;
      for (int j = 0; j < 4; ++j) {
        if (u[j] != v[j]) {
          less = u[j] < v[j];
          break;
        }
      }
      CHECK(less);
    }
  }
}

TEST_CASE("random round-trip on a large basis") {
  auto b = make_basis(6, 20);
  CHECK(b->dim() == static_cast<std::int64_t>(choose(26, 6)));
  std::mt19937_64 rng(20260816u);
  std::uniform_int_distribution<std::int64_t> pick(0, b->dim() - 1);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::int64_t i = pick(rng);
    CHECK(b->index_of(b->occ(i)) == i);
  }
}

TEST_CASE("dim_estimate agrees with the exact dimension") {
  for (int m : {2, 4, 6}) {
    for (int nmax : {3, 10, 25}) {
      auto b = make_basis(m, nmax);
      const double est = FockBasis::dim_estimate(m, nmax);
      CHECK(est == doctest::Approx(double(b->dim())).epsilon(1e-9));
    }
  }
}

TEST_CASE("vacuum occupies rank zero") {
  auto b = make_basis(5, 4);
  const std::uint8_t* occ = b->occ(0);
  for (int j = 0; j < 5; ++j) CHECK(occ[j] == 0);
  CHECK(b->sector_of(0) == 0);
}

TEST_CASE("truncation policies") {
  CHECK(truncation_for_product(8) == 8);
  CHECK(truncation_for_product(48) == 48);
  CHECK(truncation_for_coherent(12) == 12 + 21 + 6);
  CHECK(truncation_for_coherent(4) == 4 + 12 + 6);
  for (int n : {1, 2, 4, 8, 16, 32})
    CHECK(truncation_for_coherent(n) > truncation_for_product(n));
}

TEST_CASE("infeasible dimensions are rejected up front") {
  CHECK_THROWS_AS(make_basis(24, 120), infeasible_error);
  CHECK(FockBasis::dim_estimate(24, 120) > 1e26);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(make_basis(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_basis(4, -1), std::invalid_argument);
  auto b = make_basis(3, 2);
  std::uint8_t over[3] = {2, 1, 0};
  CHECK_THROWS_AS(b->index_of(over), std::invalid_argument);
}

TEST_CASE("basis hash separates shapes") {
  CHECK(make_basis(4, 6)->hash() != make_basis(4, 7)->hash());
  CHECK(make_basis(4, 6)->hash() != make_basis(6, 4)->hash());
  CHECK(make_basis(4, 6)->hash() == make_basis(4, 6)->hash());
}

TEST_CASE("state helpers: sectors, projection, number") {
  auto b = make_basis(3, 4);
  FockState psi(b);
  // superpose vacuum, one 2-particle state, one 4-particle state
  std::uint8_t occ2[3] = {1, 1, 0};
  std::uint8_t occ4[3] = {0, 3, 1};
  psi.amp(0) = 0.5;
  psi.amp(b->index_of(occ2)) = cplx(0.0, 0.5);
  psi.amp(b->index_of(occ4)) = std::sqrt(0.5);

  CHECK(psi.norm() == doctest::Approx(1.0));
  const Eigen::VectorXd w = sector_weights(psi);
  CHECK(w(0) == doctest::Approx(0.25));
  CHECK(w(1) == doctest::Approx(0.0));
  CHECK(w(2) == doctest::Approx(0.25));
  CHECK(w(4) == doctest::Approx(0.5));
  CHECK(top_occupied_sector(psi, 1e-10) == 4);
  CHECK(top_occupied_sector(vacuum_state(b), 1e-10) == 0);

  CHECK(expected_number(psi) == doctest::Approx(0.25 * 2 + 0.5 * 4));

  FockState p2 = project_sector(psi, 2);
  CHECK(p2.norm() == doctest::Approx(0.5));
  CHECK(top_occupied_sector(p2, 1e-10) == 2);

  const Eigen::VectorXd prof = occupation_profile(psi);
  CHECK(prof.sum() == doctest::Approx(expected_number(psi)));
  CHECK(prof(2) == doctest::Approx(0.5 * 1.0));

  FockState other(make_basis(3, 5));
  CHECK_THROWS_AS(inner_product(psi, other), std::invalid_argument);
}
