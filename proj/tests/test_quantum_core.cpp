#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "holo/operator.hpp"
#include "support.hpp"

using namespace holo;

namespace {

Operator projector1() { return Operator{{0, 0}, {0, 1}}; }
Operator sx() { return Operator{{0, 1}, {1, 0}}; }

// Permutation matrix P with P|levels in `order`> = |levels in ion order>:
// column index enumerates the ions in the listed order, row index in 1..N order.
Operator ion_permutation(const std::vector<std::size_t>& order, const HilbertLayout& layout) {
  const std::size_t n = layout.num_ions(), m = layout.mode_dim();
  Operator p(layout.dim());
  for (std::size_t col = 0; col < layout.dim(); ++col) {
    std::vector<int> listed(n);
    std::size_t chain = col / m;
    for (std::size_t k = n; k-- > 0;) {
      listed[k] = static_cast<int>(chain % 3);
      chain /= 3;
    }
    std::vector<int> levels(n);
    for (std::size_t k = 0; k < n; ++k) levels[order[k] - 1] = listed[k];
    p(layout.index(levels, col % m), col) = 1.0;
  }
  return p;
}

Operator identity_kron(std::size_t dim) { return Operator::identity(dim); }

}  // namespace

TEST_CASE("kron") {
  CHECK(kron(Operator::identity(2), Operator::identity(2)) == Operator::identity(4));

  const Operator k = kron(projector1(), sx());
  const Operator expected{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  CHECK(k == expected);

  const Operator a = testing::random_matrix(3), b = testing::random_matrix(3);
  const Operator ab = kron(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t kk = 0; kk < 3; ++kk)
        for (std::size_t l = 0; l < 3; ++l) CHECK(ab(i * 3 + kk, j * 3 + l) == a(i, j) * b(kk, l));

  CHECK_THROWS_AS(kron(Operator(101), Operator(100)), CapacityError);
  CHECK_NOTHROW(kron(Operator(100), Operator(100)));
  CHECK_THROWS_AS(kron(Operator(4), Operator(4), 15), CapacityError);
}

TEST_CASE("kron is associative exactly") {
  const Operator a = testing::random_matrix(2), b = testing::random_matrix(3), c = testing::random_matrix(2);
  CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
}

TEST_CASE("HilbertLayout ordering: ion 1 slowest, mode fastest") {
  const HilbertLayout l(3, 2);
  CHECK(l.dim() == 81);
  CHECK(l.mode_dim() == 3);
  CHECK(l.ion_dim() == 27);
  const std::array<int, 3> lv{1, 0, 2};
  CHECK(l.index(lv, 1) == (1 * 9 + 0 * 3 + 2) * 3 + 1);
  CHECK(l.levels_of(l.index(lv, 1)) == std::vector<int>{1, 0, 2});
  CHECK(l.phonon_of(l.index(lv, 1)) == 1);
  CHECK(l.stride(1) == 27);
  CHECK(l.stride(3) == 3);
  CHECK_THROWS(l.index(lv, 3));
  CHECK_THROWS(l.stride(4));
  CHECK(HilbertLayout(2).dim() == 9);
  CHECK(HilbertLayout(2, 0).dim() == 9);
  CHECK_THROWS(HilbertLayout(0));
}

TEST_CASE("embed") {
  const HilbertLayout two(2);
  CHECK(embed(Operator::identity(3), {1}, two) == Operator::identity(9));

  const HilbertLayout three(3);
  const Operator ee_11 = Operator::outer(9, 2 * 3 + 2, 1 * 3 + 1);
  const Operator g = embed(ee_11, {1, 2}, three);
  const std::array<int, 3> s010{0, 1, 0};
  const StateVector v = g * StateVector::basis(27, three.index(s010));
  CHECK(v.norm() == 0.0);
  const std::array<int, 3> s110{1, 1, 0}, see0{2, 2, 0};
  CHECK(g(three.index(see0), three.index(s110)) == cplx(1.0));

  CHECK_THROWS_AS(embed(ee_11, {1, 4}, three), std::out_of_range);
  CHECK_THROWS_AS(embed(ee_11, {2, 2}, three), std::invalid_argument);
  CHECK_THROWS_AS(embed(Operator::identity(3), {1, 2}, three), std::invalid_argument);
}

TEST_CASE("embed on non-adjacent ions equals a permutation-conjugated kron") {
  for (std::optional<std::size_t> cutoff : {std::optional<std::size_t>{}, std::optional<std::size_t>{2}}) {
    const HilbertLayout l(3, cutoff);
    const Operator local = testing::random_matrix(9);
    for (const auto& order : {std::vector<std::size_t>{1, 3, 2}, std::vector<std::size_t>{3, 1, 2},
                              std::vector<std::size_t>{2, 3, 1}}) {
      const Operator direct = kron(kron(local, Operator::identity(3)), identity_kron(l.mode_dim()));
      const Operator p = ion_permutation(order, l);
      const Operator oracle = testing::naive_product(testing::naive_product(p, direct), p.adjoint());
      const std::size_t ions[2] = {order[0], order[1]};
      CHECK(max_abs_diff(embed(local, ions, l), oracle) == 0.0);
    }
  }
}

TEST_CASE("embedded operators on disjoint ions commute") {
  const HilbertLayout l(4, 1);
  const Operator a = embed(testing::random_matrix(9), {1, 3}, l);
  const Operator b = embed(testing::random_matrix(3), {2}, l);
  const Operator c = embed(testing::random_matrix(3), {4}, l);
  CHECK(max_abs_diff(a * b, b * a) < 1e-12);
  CHECK(max_abs_diff(a * c, c * a) < 1e-12);
}

TEST_CASE("apply_embedded matches embed times block") {
  const HilbertLayout l(3, 1);
  const Operator local = testing::random_matrix(9);
  const std::size_t cols = 4;
  std::vector<cplx> block(l.dim() * cols);
  for (auto& v : block) v = testing::random_cplx();
  const std::size_t ions[2] = {3, 1};
  const std::vector<cplx> fast = apply_embedded(local, ions, l, block, cols);
  const Operator full = embed(local, ions, l);
  for (std::size_t r = 0; r < l.dim(); ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      cplx s{};
      for (std::size_t k = 0; k < l.dim(); ++k) s += full(r, k) * block[k * cols + c];
      CHECK(std::abs(fast[r * cols + c] - s) < 1e-12);
    }
}

TEST_CASE("ladder operators") {
  const LadderOps z = ladder_ops(0);
  CHECK(z.a == Operator(1));
  CHECK(z.a_dagger == Operator(1));

  const LadderOps l2 = ladder_ops(2);
  const Operator expected{{0, 1, 0}, {0, 0, std::sqrt(2.0)}, {0, 0, 0}};
  CHECK(l2.a == expected);
  CHECK(l2.a_dagger == expected.adjoint());

  const LadderOps l5 = ladder_ops(5);
  const Operator comm = l5.a * l5.a_dagger - l5.a_dagger * l5.a;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
  CHECK(std::abs(comm(5, 5) + 5.0) < 1e-14);  // truncation artefact
}

TEST_CASE("expm") {
  CHECK(expm(Operator(4), 1.3) == Operator::identity(4));

  const double w = 2.7, t = 0.41;
  const Operator h{{0, w}, {w, 0}};
  const Operator u = expm(h, t);
  CHECK(std::abs(u(0, 0) - std::cos(w * t)) < 1e-14);
  CHECK(std::abs(u(0, 1) - cplx(0, -std::sin(w * t))) < 1e-14);

  for (int trial = 0; trial < 5; ++trial) {
    const Operator r = testing::random_hermitian(8);
    const double tt = testing::uniform(-2, 2);
    const Operator e = expm(r, tt);
    CHECK(max_abs_diff(e, testing::series_expm(r, tt)) < 1e-10);
    CHECK(testing::unitarity_defect(e) < 1e-10);
  }

  Operator bad = testing::random_hermitian(3);
  bad(0, 1) += 0.1;
  CHECK_THROWS_AS(expm(bad, 1.0), std::domain_error);
}

TEST_CASE("expm group property") {
  for (std::size_t dim : {2, 9, 32}) {
    const Operator h = testing::random_hermitian(dim);
    const double t1 = testing::uniform(-1, 1), t2 = testing::uniform(-1, 1);
    CHECK(max_abs_diff(expm(h, t1 + t2), expm(h, t1) * expm(h, t2)) < 1e-9);
  }
}

TEST_CASE("HermitianPropagator::apply agrees with at") {
  const Operator h = testing::random_hermitian(6);
  const HermitianPropagator p(h);
  const std::size_t cols = 2;
  std::vector<cplx> block(6 * cols);
  for (auto& v : block) v = testing::random_cplx();
  const auto out = p.apply(0.7, block, cols);
  const Operator u = p.at(0.7);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      cplx s{};
      for (std::size_t k = 0; k < 6; ++k) s += u(r, k) * block[k * cols + c];
      CHECK(std::abs(out[r * cols + c] - s) < 1e-12);
    }
}

TEST_CASE("state vectors and density matrices") {
  StateVector v(3);
  CHECK_THROWS_AS(v.normalize(), std::domain_error);
  v[0] = 3.0;
  v[2] = cplx(0, 4.0);
  v.normalize();
  CHECK(std::abs(v.norm() - 1.0) < 1e-15);
  const DensityMatrix rho = DensityMatrix::pure(v);
  CHECK_NOTHROW(rho.validate());
  CHECK(std::abs(rho.purity() - 1.0) < 1e-12);

  Operator not_unit = Operator::identity(2);
  CHECK_THROWS_AS(DensityMatrix(not_unit).validate(), std::domain_error);
  Operator negative{{1.5, 0}, {0, -0.5}};
  CHECK_THROWS_AS(DensityMatrix(negative).validate(), std::domain_error);
  Operator skew{{0.5, 0.1}, {0.0, 0.5}};
  CHECK_THROWS_AS(DensityMatrix(skew).validate(), std::domain_error);
}

TEST_CASE("partial trace over the mode") {
  const HilbertLayout l(2, 2);
  const StateVector ions = testing::random_state(9);
  const Operator rho_ions = ions.projector();
  const Operator vac = StateVector::basis(3, 0).projector();
  const DensityMatrix reduced = partial_trace_mode(DensityMatrix(with_mode(rho_ions, vac, l)), l);
  CHECK(max_abs_diff(reduced.op(), rho_ions) < 1e-15);

  Operator mixed = Operator::identity(l.dim());
  mixed *= 1.0 / static_cast<double>(l.dim());
  Operator expected = Operator::identity(9);
  expected *= 1.0 / 9.0;
  CHECK(max_abs_diff(partial_trace_mode(DensityMatrix(mixed), l).op(), expected) < 1e-15);

  CHECK_THROWS_AS(partial_trace_mode(DensityMatrix(Operator::identity(9)), HilbertLayout(2)), std::invalid_argument);
}

TEST_CASE("partial trace purity matches the Schmidt coefficients") {
  const HilbertLayout l(2, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector psi = testing::random_state(l.dim());
    Eigen::MatrixXcd m(9, 4);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t n = 0; n < 4; ++n) m(i, n) = psi[i * 4 + n];
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
    double oracle = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) oracle += std::pow(s(k), 4);
    const DensityMatrix r = partial_trace_mode(DensityMatrix::pure(psi), l);
    CHECK(std::abs(r.purity() - oracle) < 1e-12);
    CHECK(std::abs(r.op().trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace is linear and trace preserving") {
  const HilbertLayout l(1, 3);
  const Operator a = testing::random_matrix(l.dim()), b = testing::random_matrix(l.dim());
  const cplx alpha(0.3, -1.2);
  const Operator lhs = partial_trace_mode(DensityMatrix(a + alpha * b), l).op();
  const Operator rhs = partial_trace_mode(DensityMatrix(a), l).op() + alpha * partial_trace_mode(DensityMatrix(b), l).op();
  CHECK(max_abs_diff(lhs, rhs) < 1e-13);
  CHECK(std::abs(partial_trace_mode(DensityMatrix(a), l).op().trace() - a.trace()) < 1e-13);
}

TEST_CASE("operator basics") {
  const Operator a = testing::random_matrix(5);
  CHECK(max_abs_diff(a * Operator::identity(5), a) == 0.0);
  CHECK(max_abs_diff(a * a, testing::naive_product(a, a)) < 1e-12);
  CHECK(a.adjoint().adjoint() == a);
  CHECK(testing::random_hermitian(5).is_hermitian(1e-12));
  CHECK(std::abs(Operator{{3, 0}, {0, -4}}.op_norm() - 4.0) < 1e-14);
  CHECK_THROWS_AS(Operator(2, std::vector<cplx>(3)), std::invalid_argument);
  CHECK_THROWS_AS(Operator(2) * Operator(3), std::invalid_argument);
  CHECK(Operator::outer(3, 2, 0).nonzeros() == 1);
}
