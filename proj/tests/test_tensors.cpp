#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "elastrim/boundary.hpp"
#include "elastrim/errors.hpp"
#include "elastrim/forms.hpp"
#include "elastrim/guesses.hpp"
#include "elastrim/tensors.hpp"

using namespace elastrim;

namespace {

constexpr double kPi = std::numbers::pi;

// 6x6 matrix representation of the tensor as an operator on vec(3x2).
Eigen::Matrix<double, 6, 6> operator_matrix(const ElasticityField& field,
                                            const Vec2& p) {
  Eigen::Matrix<double, 6, 6> M;
  for (int col = 0; col < 6; ++col) {
    Mat32 E = Mat32::Zero();
    E(col % 3, col / 3) = 1.0;
    const Mat32 out = field.apply(p, E);
    for (int row = 0; row < 6; ++row) M(row, col) = out(row % 3, row / 3);
  }
  return M;
}

Vec2 random_disc_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const Vec2 p(u(rng), u(rng));
    if (p.norm() <= 1.0) return p;
  }
}

}  // namespace

TEST_CASE("identity tensor returns its argument") {
  ElasticityField field{TensorKind::identity};
  Mat32 G;
  G << 1, 2, 3, 4, 5, 6;
  CHECK((field.apply(Vec2(0.3, -0.4), G) - G).norm() == 0.0);
}

TEST_CASE("aniso_trace hand evaluation") {
  ElasticityField field{TensorKind::aniso_trace};
  Mat32 G = Mat32::Zero();
  G(0, 0) = 1.0;
  const Mat32 out = field.apply(Vec2(0.5, 0.0), G);
  CHECK(out(0, 0) == doctest::Approx(0.5 * 1.0 + 2.0 * 1.0));  // 2.5
  CHECK(out(1, 1) == doctest::Approx(0.5));
  CHECK(out(2, 0) == doctest::Approx(0.0));
  CHECK(out(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("aniso_shear at the symmetry line u = 0") {
  ElasticityField field{TensorKind::aniso_shear};
  Mat32 G;
  G << 1, -1, 0.5, 2, -3, 0.25;
  const Mat32 out = field.apply(Vec2(0.0, 0.7), G);
  Mat32 expected = 2.0 * G;  // sin^2(0) = 0
  const double tr = G(0, 0) + G(1, 1);
  expected(0, 0) += tr;
  expected(1, 1) += tr;
  CHECK((out - expected).norm() < 1e-14);
}

TEST_CASE("catalog tensors have major symmetry and are coercive") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const TensorKind kind : {TensorKind::identity, TensorKind::aniso_trace,
                                TensorKind::aniso_shear}) {
    const ElasticityField field{kind};
    const double bound = kind == TensorKind::identity ? 1.0 : 2.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec2 p = random_disc_point(rng);
      const auto M = operator_matrix(field, p);
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(M);
      CHECK(eig.eigenvalues().minCoeff() >= bound - 1e-12);

      // Operator form against a random inner-product identity.
      Mat32 A, B;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
          A(i, j) = u(rng);
          B(i, j) = u(rng);
        }
      const double lhs = field.apply(p, A).cwiseProduct(B).sum();
      const double rhs = field.apply(p, B).cwiseProduct(A).sum();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("tensor and guess names round trip") {
  for (const char* name : {"identity", "aniso_trace", "aniso_shear"})
    CHECK(tensor_name(tensor_from_name(name)) == name);
  CHECK_THROWS_AS(tensor_from_name("isotropic"), std::invalid_argument);
  for (const char* name :
       {"disc", "ellipse", "paraboloid", "pringle", "shoehorn"})
    CHECK(guess_name(guess_from_name(name)) == name);
  CHECK_THROWS_AS(guess_from_name("sphere"), std::invalid_argument);
}

TEST_CASE("guess field displays") {
  const Vec3 disc = guess_field(GuessKind::disc, 1.0, kPi / 2.0);
  CHECK((disc - Vec3(-1.0, 0.0, 0.0)).norm() < 1e-15);

  const Vec3 apex = guess_field(GuessKind::paraboloid, 0.0, 2.1);
  CHECK(apex.norm() == 0.0);

  const Vec3 shoe = guess_field(GuessKind::shoehorn, 1.0, 0.0);
  CHECK((shoe - Vec3(1.0, 0.0, 1.0)).norm() < 1e-15);

  const Vec3 ell = guess_field(GuessKind::ellipse, 0.5, 0.3);
  CHECK(ell[0] == doctest::Approx(0.5 * std::sin(0.3)));
  CHECK(ell[2] == doctest::Approx(ell[0]));

  const Vec3 pr = guess_field(GuessKind::pringle, 0.8, 1.1);
  CHECK(pr[2] == doctest::Approx(0.64 * std::sin(1.1) * std::sin(1.1)));
}

TEST_CASE("disc and paraboloid interpolation is exact") {
  const Mesh mesh = generate_disc_mesh(16, 0.7);
  const DofLayout layout = build_dofmaps(mesh);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.9);

  const State disc = interpolate_guess(mesh, layout, GuessKind::disc);
  const State parab = interpolate_guess(mesh, layout, GuessKind::paraboloid);
  CHECK(disc.l.norm() == 0.0);

  for (int trial = 0; trial < 60; ++trial) {
    const int c = static_cast<int>(rng() % mesh.n_cells());
    const double x = u(rng);
    const double y = u(rng) * (1.0 - x);
    const Vec2 ref(x, y);
    const Vec2 p = mesh.physical_point(c, ref);

    const Vec3 d = evaluate_in_cell(disc, layout, c, ref);
    CHECK((d - Vec3(-p.y(), p.x(), 0.0)).norm() < 1e-12);

    const Vec3 q = evaluate_in_cell(parab, layout, c, ref);
    CHECK((q - Vec3(p.x(), p.y(), -p.squaredNorm())).norm() < 1e-12);
  }
}

TEST_CASE("interpolants of continuous guesses have zero jumps") {
  const Mesh mesh = generate_disc_mesh(12, 1.0);
  const DofLayout layout = build_dofmaps(mesh);
  for (const GuessKind kind : {GuessKind::disc, GuessKind::shoehorn}) {
    const State state = interpolate_guess(mesh, layout, kind);
    Problem problem;
    const EnergyBreakdown e = augmented_energy(state, problem, mesh, layout);
    CHECK(std::abs(e.sipg_penalty) < 1e-12);
    CHECK(std::abs(e.sipg_consistency) < 1e-12);
  }
}

TEST_CASE("rescale to perimeter") {
  const Mesh mesh = generate_disc_mesh(252, 0.5);
  const DofLayout layout = build_dofmaps(mesh);
  const State raw = interpolate_guess(mesh, layout, GuessKind::disc);

  const State scaled = rescale_to_perimeter(raw, mesh, layout);
  const double factor = scaled.x[0] != 0.0 ? scaled.x[0] / raw.x[0]
                                           : scaled.x[1] / raw.x[1];
  const double expected = 2.0 * kPi / (2.0 * 252.0 * std::sin(kPi / 252.0));
  CHECK(factor == doctest::Approx(expected).epsilon(1e-12));
  CHECK(perimeter(scaled, mesh, layout) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-12));

  SUBCASE("idempotent") {
    const State twice = rescale_to_perimeter(scaled, mesh, layout);
    CHECK((twice.x - scaled.x).norm() < 1e-12 * scaled.x.norm());
  }
  SUBCASE("scale invariant") {
    State big = raw;
    big.x *= 5.0;
    const State from_big = rescale_to_perimeter(big, mesh, layout);
    CHECK((from_big.x - scaled.x).norm() < 1e-12 * scaled.x.norm());
  }
  SUBCASE("degenerate guess is rejected") {
    CHECK_THROWS_AS(rescale_to_perimeter(zero_state(layout), mesh, layout),
                    GeometryError);
  }
}
