#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "gkpca/rng.hpp"
#include "gkpca/synth.hpp"

using gkpca::Index;
using gkpca::IndexRange;
using gkpca::Matrix;
using gkpca::ModelParams;

TEST_CASE("randrange: degenerate size and endpoint bounds") {
  gkpca::Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const IndexRange r1 = gkpca::randrange(1, rng);
    CHECK(r1.lo == 0);
    CHECK(r1.hi == 0);
    const IndexRange r = gkpca::randrange(10, rng);
    CHECK(r.lo >= 0);
    CHECK(r.lo <= r.hi);
    CHECK(r.hi < 10);
  }
}

TEST_CASE("randrange: probability of the full range is 2 in n^2") {
  // Two ordered draws from 10 values: exactly the pairs (first, last) and
  // (last, first) produce the full range, so P = 2/100.
  gkpca::Rng rng(20250815);
  const int trials = 1000000;
  int full = 0;
  for (int t = 0; t < trials; ++t) {
    const IndexRange r = gkpca::randrange(10, rng);
    if (r.lo == 0 && r.hi == 9) ++full;
  }
  const double p = static_cast<double>(full) / trials;
  CHECK(std::abs(p - 0.02) <= 7e-4);  // five sigma at this trial count
}

TEST_CASE("model: parameter validation") {
  ModelParams p;
  p.m = 0;
  p.n = 5;
  CHECK_THROWS_AS((void)gkpca::model(p), std::invalid_argument);
  p.m = 5;
  p.nsignal = -1;
  CHECK_THROWS_AS((void)gkpca::model(p), std::invalid_argument);
  p.nsignal = 0;
  p.rkins = 1.5;
  CHECK_THROWS_AS((void)gkpca::model(p), std::invalid_argument);
  p.rkins = -0.1;
  CHECK_THROWS_AS((void)gkpca::model(p), std::invalid_argument);
  p.rkins = 0.0;
  p.r = -1;
  CHECK_THROWS_AS((void)gkpca::model(p), std::invalid_argument);
}

TEST_CASE("model: empty recipe gives the zero matrix") {
  ModelParams p;
  p.m = 5;
  p.n = 5;
  p.seed = 9;
  const Matrix A = gkpca::model(p);
  CHECK(A.rows() == 5);
  CHECK(A.cols() == 5);
  CHECK(A.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("model: single block on a 1x1 matrix writes one dosage") {
  ModelParams p;
  p.m = 1;
  p.n = 1;
  p.r = 1;
  p.seed = 123;
  const Matrix A = gkpca::model(p);
  CHECK((A(0, 0) == 0.0 || A(0, 0) == 1.0 || A(0, 0) == 2.0));
}

TEST_CASE("model: every entry is a valid dosage") {
  ModelParams p;
  p.m = 40;
  p.n = 30;
  p.r = 6;
  p.nsignal = 500;
  p.rkins = 0.2;
  p.seed = 77;
  const Matrix A = gkpca::model(p);
  for (Index i = 0; i < p.m; ++i)
    for (Index j = 0; j < p.n; ++j)
      CHECK((A(i, j) == 0.0 || A(i, j) == 1.0 || A(i, j) == 2.0));
}

TEST_CASE("model: identical seeds reproduce the matrix exactly") {
  ModelParams p;
  p.m = 25;
  p.n = 35;
  p.r = 4;
  p.nsignal = 300;
  p.rkins = 0.1;
  p.seed = 4242;
  const Matrix A = gkpca::model(p);
  const Matrix B = gkpca::model(p);
  CHECK((A - B).lpNorm<Eigen::Infinity>() == 0.0);
  p.seed = 4243;
  const Matrix C = gkpca::model(p);
  CHECK((A - C).lpNorm<Eigen::Infinity>() != 0.0);
}

TEST_CASE("model: kinship duplication leaves identical row pairs") {
  ModelParams p;
  p.m = 100;
  p.n = 50;
  p.r = 0;
  p.nsignal = 20000;  // densely scrambled rows, so duplicates are detectable
  p.rkins = 0.1;      // ten duplication events
  p.seed = 555;
  const Matrix A = gkpca::model(p);
  int duplicate_rows = 0;
  for (Index i = 0; i < p.m; ++i) {
    bool has_twin = false;
    for (Index j = 0; j < p.m; ++j)
      if (j != i && (A.row(i) - A.row(j)).lpNorm<Eigen::Infinity>() == 0.0)
        has_twin = true;
    if (has_twin) ++duplicate_rows;
  }
  // Ten copy events on randomly filled rows: at least one surviving pair
  // (failure of every single event has vanishing probability).
  CHECK(duplicate_rows >= 2);
}

TEST_CASE("model: dense signal writes cover the dosage alphabet uniformly") {
  ModelParams p;
  p.m = 20;
  p.n = 20;
  p.nsignal = 4000;  // ten rewrites per entry in expectation
  p.seed = 31337;
  const Matrix A = gkpca::model(p);
  std::set<double> seen;
  double sum = 0.0;
  for (Index i = 0; i < p.m; ++i)
    for (Index j = 0; j < p.n; ++j) {
      seen.insert(A(i, j));
      sum += A(i, j);
    }
  CHECK(seen.size() == 3);  // all of {0, 1, 2} appear
  const double mean = sum / (20.0 * 20.0);
  CHECK(std::abs(mean - 1.0) <= 0.21);  // five sigma for 400 iid dosages
}
