#include <vector>

#include "doctest.h"
#include "mccm/choice_oracle.hpp"
#include "mccm/errors.hpp"
#include "mccm/model.hpp"
#include "mccm/plan.hpp"
#include "test_support.hpp"

using namespace mccm;

TEST_CASE("symmetric model splits evenly and never walks away") {
  ModelParams m = testsupport::symmetric3();
  Eigen::VectorXd pi = exact_choice_probs(m, Assortment({1, 2}));
  CHECK(pi[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pi[2] == doctest::Approx(0.5).epsilon(1e-12));

  // the walk cannot exit, so a singleton assortment soaks up everything
  CHECK(exact_choice_probs(m, Assortment({1}))[1] == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd p = absorption_probabilities(m, Assortment({1, 2}));
  CHECK(p(3, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(3, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(3, 0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("asymmetric model matches the hand-solved absorption equations") {
  // from state 1 with S={2}: x1 = 0.4 + 0.4 x3, x3 = 0.6 + 0.3 x1
  ModelParams m = testsupport::worked3();
  const Assortment s({2});
  Eigen::MatrixXd p = absorption_probabilities(m, s);
  const int col2 = s.outcome_index(2);
  CHECK(p(1, col2) == doctest::Approx(8.0 / 11.0).epsilon(1e-13));
  CHECK(p(3, col2) == doctest::Approx(9.0 / 11.0).epsilon(1e-13));
  CHECK(p(1, col2) == doctest::Approx(0.4 + 0.4 * p(3, col2)).epsilon(1e-13));

  Eigen::VectorXd pi = exact_choice_probs(m, s);
  CHECK(pi[col2] ==
        doctest::Approx(0.2 * 8.0 / 11.0 + 0.5 + 0.3 * 9.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("linear-solve absorption agrees with repeated squaring") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    ModelParams m = generate_random(5, seed % 2 ? 0.0 : 0.3, seed);
    for (int r = 1; r <= 5; ++r) {
      for (const Assortment& s : assortments_of_size(5, r)) {
        Eigen::VectorXd direct = exact_choice_probs(m, s);
        Eigen::VectorXd squared = testsupport::squaring_choice_probs(m, s);
        CHECK((direct - squared).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("absorption matrix structure") {
  ModelParams m = generate_random(6, 0.2, 11);
  const Assortment s({2, 4, 5});
  Eigen::MatrixXd p = absorption_probabilities(m, s);
  REQUIRE(p.rows() == 7);
  REQUIRE(p.cols() == 4);
  // absorbing rows are exact indicators
  CHECK(p(0, 0) == 1.0);
  CHECK(p.row(0).tail(3).maxCoeff() == 0.0);
  for (int j : s.products()) {
    CHECK(p(j, s.outcome_index(j)) == 1.0);
    CHECK(p.row(j).sum() == 1.0);
  }
  for (int i = 0; i <= 6; ++i) {
    CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p.row(i).minCoeff() >= -1e-12);
  }
}

TEST_CASE("choice probabilities are distributions and the full set returns lambda") {
  ModelParams m = generate_random(7, 0.2, 5);
  for (int r : {1, 3, 7}) {
    for (const Assortment& s : assortments_of_size(7, r)) {
      Eigen::VectorXd pi = exact_choice_probs(m, s);
      CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(pi.minCoeff() >= -1e-12);
    }
  }
  Eigen::VectorXd pi_full = exact_choice_probs(m, Assortment::full(7));
  CHECK((pi_full - m.lambda).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unreachable offered products make the absorbing solve fail loudly") {
  ModelParams m = testsupport::worked3();
  m.rho.row(2) << 0.0, 0.0, 0.0, 1.0;  // 2 -> 3
  m.rho.row(3) << 0.0, 0.0, 0.0, 1.0;  // 3 -> 3 forever (invalid on purpose)
  CHECK_THROWS_AS(absorption_probabilities(m, Assortment({1})), SingularSystem);
}

TEST_CASE("exact tables collapse duplicates and feed lookups") {
  ModelParams m = testsupport::symmetric3();
  std::vector<Assortment> list = {Assortment({1, 2}), Assortment({2, 1}), Assortment({1, 3})};
  ChoiceTable table = exact_choice_table(m, list);
  CHECK(table.size() == 2);
  CHECK(table.pi(Assortment({1, 2}), 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(table.probs(Assortment({2, 3})), MissingAssortment);
}

TEST_CASE("conditional probabilities: absorbing origins are trivial") {
  ModelParams m = testsupport::worked3();
  const Assortment s({1, 3});
  CHECK(conditional_direct(m, s, 1, 1) == 1.0);
  CHECK(conditional_direct(m, s, 3, 3) == 1.0);
  CHECK(conditional_direct(m, s, 0, 0) == 1.0);
  CHECK(conditional_direct(m, s, 1, 3) == 0.0);
  CHECK(conditional_direct(m, s, 0, 1) == 0.0);
  // transient origin rows are distributions
  double total = 0.0;
  for (int j : s.outcomes()) total += conditional_direct(m, s, 2, j);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric model conditional from tables reproduces the hand value") {
  ModelParams m = testsupport::symmetric3();
  ChoiceTable table = exact_choice_table(m, {Assortment({1, 2}), Assortment({1, 2, 3})});
  // (pi(1,{1,2}) - pi(1,{1,2,3})) / pi(3,{1,2,3}) = (1/2 - 1/3) / (1/3) = 1/2
  double v = conditional_from_tables(table, Assortment({1, 2}), 3, 1);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v == doctest::Approx(conditional_direct(m, Assortment({1, 2}), 3, 1)).epsilon(1e-12));
}

TEST_CASE("table-based conditionals equal definition-based conditionals everywhere") {
  for (std::uint64_t seed : {10ull, 11ull}) {
    ModelParams m = generate_random(5, seed % 2 ? 0.2 : 0.0, seed);
    std::vector<Assortment> everything;
    for (int r = 2; r <= 4; ++r)
      for (const Assortment& s : assortments_of_size(5, r)) everything.push_back(s);
    ChoiceTable table = exact_choice_table(m, everything);
    for (int r = 2; r <= 3; ++r) {
      for (const Assortment& s : assortments_of_size(5, r)) {
        for (int i = 1; i <= 5; ++i) {
          if (s.contains(i)) continue;
          for (int j : s.outcomes()) {
            const double via_tables = conditional_from_tables(table, s, i, j);
            const double via_model = conditional_direct(m, s, i, j);
            CHECK(via_tables == doctest::Approx(via_model).epsilon(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("decomposition identity with all three factors computed independently") {
  for (std::uint64_t seed : {21ull, 22ull}) {
    ModelParams m = generate_random(6, seed % 2 ? 0.2 : 0.0, seed);
    for (int r : {2, 3}) {
      for (const Assortment& s : assortments_of_size(6, r)) {
        Eigen::VectorXd pi_s = exact_choice_probs(m, s);
        for (int i = 1; i <= 6; ++i) {
          if (s.contains(i)) continue;
          const Assortment si = s.with(i);
          Eigen::VectorXd pi_si = exact_choice_probs(m, si);
          for (int j : s.outcomes()) {
            const double lhs = pi_s[s.outcome_index(j)];
            const double rhs = pi_si[si.outcome_index(j)] +
                               conditional_direct(m, s, i, j) * pi_si[si.outcome_index(i)];
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
          }
        }
      }
    }
  }
}

TEST_CASE("zero denominators and missing assortments are reported, not guessed") {
  ChoiceTable table(3);
  Eigen::VectorXd v2(3);
  v2 << 0.5, 0.5, 0.0;  // outcome 2 never chosen in {1,2}
  table.set(Assortment({1, 2}), v2);
  Eigen::VectorXd v1(2);
  v1 << 0.5, 0.5;
  table.set(Assortment({1}), v1);
  CHECK_THROWS_AS(conditional_from_tables(table, Assortment({1}), 2, 1), ZeroDenominator);
  CHECK_THROWS_AS(conditional_from_tables(table, Assortment({1}), 3, 1), MissingAssortment);
  CHECK_THROWS_WITH_AS(conditional_from_tables(table, Assortment({2}), 3, 2),
                       doctest::Contains("{2,3}"), MissingAssortment);
}

TEST_CASE("noisy quotients are clamped into [0,1]") {
  ChoiceTable table(2);
  Eigen::VectorXd one(2), both(3);

  one << 0.4, 0.6;
  both << 0.6, 0.1, 0.3;  // quotient (0.6-0.1)/0.3 > 1
  table.set(Assortment({1}), one);
  table.set(Assortment({1, 2}), both);
  CHECK(conditional_from_tables(table, Assortment({1}), 2, 1) == 1.0);

  ChoiceTable low(2);
  one << 0.9, 0.1;
  both << 0.4, 0.3, 0.3;  // quotient (0.1-0.3)/0.3 < 0
  low.set(Assortment({1}), one);
  low.set(Assortment({1, 2}), both);
  CHECK(conditional_from_tables(low, Assortment({1}), 2, 1) == 0.0);
}

TEST_CASE("conditional tables: identity substructure and oracle agreement") {
  ModelParams m = testsupport::symmetric3();
  std::vector<Assortment> size2 = assortments_of_size(3, 2);
  std::vector<Assortment> all = size2;
  all.push_back(Assortment::full(3));
  ChoiceTable table = exact_choice_table(m, all);
  ConditionalTable cond = build_conditional_table(table, size2);

  for (const Assortment& s : size2) {
    for (int k : s.outcomes())
      for (int j : s.outcomes()) CHECK(cond.value(s, k, j) == (k == j ? 1.0 : 0.0));
    for (int k = 0; k <= 3; ++k)
      for (int j : s.outcomes())
        CHECK(cond.value(s, k, j) ==
              doctest::Approx(conditional_direct(m, s, k, j)).epsilon(1e-12));
  }

  ConditionalTable empty = build_conditional_table(table, {});
  CHECK(empty.size() == 0);
}

TEST_CASE("conditional table construction aggregates every failure") {
  ModelParams m = testsupport::symmetric3();
  // {1,3} is present but its superset {1,2,3} is not
  ChoiceTable table = exact_choice_table(m, {Assortment({1, 3})});
  try {
    build_conditional_table(table, {Assortment({1, 3})});
    FAIL("expected ConditionalBuildError");
  } catch (const ConditionalBuildError& e) {
    REQUIRE(e.missing().size() == 1);
    CHECK(e.zero_denominator().empty());
    CHECK(e.missing()[0].find("{1,3}") != std::string::npos);
  }
}

TEST_CASE("lenient conditional tables leave readable holes") {
  ChoiceTable table(3);
  Eigen::VectorXd v12(3), v123(4), v13(3);
  v12 << 0.5, 0.5, 0.0;
  v123 << 0.4, 0.4, 0.0, 0.2;  // pi(2, {1,2,3}) = 0: origin-2 conditionals for {1,3} die
  v13 << 0.4, 0.3, 0.3;
  table.set(Assortment({1, 2}), v12);
  table.set(Assortment({1, 2, 3}), v123);
  table.set(Assortment({1, 3}), v13);

  std::vector<std::string> failures;
  ConditionalTable cond =
      build_conditional_table_lenient(table, {Assortment({1, 3})}, kExactDenomTol, &failures);
  REQUIRE(failures.size() == 1);
  CHECK(failures[0].find("{1,3}") != std::string::npos);
  CHECK_THROWS_AS(cond.value(Assortment({1, 3}), 2, 1), ZeroDenominator);
  // the identity block is still fine
  CHECK(cond.value(Assortment({1, 3}), 1, 1) == 1.0);

  // a missing superset still fails the build even in lenient mode
  ChoiceTable missing(3);
  missing.set(Assortment({1, 2}), v12);
  try {
    build_conditional_table_lenient(missing, {Assortment({1, 2})}, kExactDenomTol, &failures);
    FAIL("expected ConditionalBuildError");
  } catch (const ConditionalBuildError& e) {
    CHECK_FALSE(e.missing().empty());
  }
}
