#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "eit/fem.hpp"
#include "eit/mesh.hpp"
#include "eit/rng.hpp"
#include "test_helpers.hpp"

using namespace eit;

namespace {

Mesh small_disk(int target = 260, int electrodes = 8, std::uint64_t seed = 21) {
  return generate_disk_mesh(140.0, electrodes, 30.0, target, seed);
}

// Tetrapolar transfer voltage: drive +/-amplitude on (a, b), read U_c - U_d.
double transfer_voltage(const FemSystem& sys, int a, int b, int c, int d, double ma) {
  CurrentPatternSet p;
  p.currents_ma = Mat::Zero(1, sys.n_electrodes());
  p.currents_ma(0, a) = ma;
  p.currents_ma(0, b) = -ma;
  const auto sol = solve_forward(sys, p);
  return sol.voltages_mv(c) - sol.voltages_mv(d);
}

}  // namespace

TEST_CASE("adjacent patterns: layout, zero sums, rank") {
  const auto p = adjacent_patterns(4, 2.0);
  CHECK(p.n_patterns() == 3);
  CHECK(p.currents_ma(0, 0) == 2.0);
  CHECK(p.currents_ma(0, 1) == -2.0);
  CHECK(p.currents_ma(0, 2) == 0.0);
  CHECK(p.currents_ma(0, 3) == 0.0);

  const auto p32 = adjacent_patterns(32, 2.0);
  CHECK(p32.n_patterns() == 31);
  for (int k = 0; k < 31; ++k) CHECK(p32.currents_ma.row(k).sum() == 0.0);
  Eigen::ColPivHouseholderQR<Mat> qr(p32.currents_ma.transpose());
  CHECK(qr.rank() == 31);
}

TEST_CASE("trigonometric patterns: values, zero sums, rank") {
  const auto p = trig_patterns(4, 0.2);
  CHECK(p.n_patterns() == 3);
  CHECK(p.currents_ma(0, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(p.currents_ma(0, 1)) < 1e-15);
  CHECK(p.currents_ma(0, 2) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(std::abs(p.currents_ma(0, 3)) < 1e-15);

  const auto p32 = trig_patterns(32, 0.2);
  CHECK(p32.n_patterns() == 31);
  for (int k = 0; k < 31; ++k)
    CHECK(std::abs(p32.currents_ma.row(k).sum()) < 1e-12 * 0.2 * 32);
  Eigen::ColPivHouseholderQR<Mat> qr(p32.currents_ma.transpose());
  CHECK(qr.rank() == 31);

  CHECK_THROWS_AS(trig_patterns(5, 0.2), ConfigError);
}

TEST_CASE("P1 element stiffness matches the analytic triangle matrix") {
  const Mesh m = testing::single_triangle_mesh();
  const Eigen::Matrix3d k = p1_element_stiffness(m, 0);
  Eigen::Matrix3d expected;
  expected << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  CHECK((k - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("assembled system is symmetric and linear in sigma") {
  const Mesh m = small_disk();
  FemAssembler assembler(m);
  const auto z = uniform_contact_impedance(m.n_electrodes(), 5e-6);
  const auto a1 = assembler.assemble(make_field(m, 0.42), z);
  const Mat d1 = Mat(a1.matrix);
  CHECK((d1 - d1.transpose()).cwiseAbs().maxCoeff() < 1e-12 * d1.cwiseAbs().maxCoeff());

  // doubling sigma exactly doubles the conductivity part
  const auto a2 = assembler.assemble(make_field(m, 0.84), z);
  const auto ah = assembler.assemble(make_field(m, 0.21), z);
  const Mat lhs = Mat(a2.matrix) - d1;
  const Mat rhs = 2.0 * (d1 - Mat(ah.matrix));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * d1.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(assembler.assemble(make_field(m, -1.0), z), UsageError);
  CHECK_THROWS_AS(
      assembler.assemble(make_field(m, 0.42), uniform_contact_impedance(m.n_electrodes(), 0.0)),
      UsageError);
}

TEST_CASE("electrode voltages sum to zero per pattern") {
  const Mesh m = small_disk();
  const auto sys = assemble_system(m, make_field(m, 0.42),
                                   uniform_contact_impedance(m.n_electrodes(), 5e-6));
  const auto sol = solve_forward(sys, adjacent_patterns(m.n_electrodes(), 2.0));
  const int L = m.n_electrodes();
  const double umax = sol.voltages_mv.cwiseAbs().maxCoeff();
  for (int k = 0; k < sol.n_patterns; ++k)
    CHECK(std::abs(sol.voltages_mv.segment(k * L, L).sum()) < 1e-9 * umax);
}

TEST_CASE("reciprocity of tetrapolar voltages") {
  const Mesh m = small_disk(300);
  Rng rng(5);
  Vec sigma = Vec::Constant(m.n_elements(), 0.42);
  for (int e = 0; e < m.n_elements(); ++e) sigma(e) *= 1.0 + 0.5 * rng.uniform();
  const auto sys = assemble_system(m, make_field(m, sigma),
                                   uniform_contact_impedance(m.n_electrodes(), 5e-6));
  const double t1 = transfer_voltage(sys, 0, 1, 4, 5, 2.0);
  const double t2 = transfer_voltage(sys, 4, 5, 0, 1, 2.0);
  CHECK(std::abs(t1 - t2) < 1e-8 * std::max(std::abs(t1), std::abs(t2)));
  const double t3 = transfer_voltage(sys, 2, 6, 1, 7, 2.0);
  const double t4 = transfer_voltage(sys, 1, 7, 2, 6, 2.0);
  CHECK(std::abs(t3 - t4) < 1e-8 * std::max(std::abs(t3), std::abs(t4)));
}

TEST_CASE("voltages scale exactly with the injected current") {
  const Mesh m = small_disk();
  const auto sys = assemble_system(m, make_field(m, 0.42),
                                   uniform_contact_impedance(m.n_electrodes(), 5e-6));
  const auto u1 = solve_forward(sys, adjacent_patterns(m.n_electrodes(), 2.0)).voltages_mv;
  const auto u4 = solve_forward(sys, adjacent_patterns(m.n_electrodes(), 8.0)).voltages_mv;
  CHECK((u4 - 4.0 * u1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("voltage convergence under mesh refinement") {
  const auto z5 = [](const Mesh& m) {
    return uniform_contact_impedance(m.n_electrodes(), 5e-6);
  };
  const Mesh coarse = generate_disk_mesh(140.0, 16, 20.0, 1500, 3);
  const Mesh fine = generate_disk_mesh(140.0, 16, 20.0, 6000, 4);
  const auto patterns = adjacent_patterns(16, 2.0);
  const Vec uc =
      solve_forward(assemble_system(coarse, make_field(coarse, 0.42), z5(coarse)), patterns)
          .voltages_mv;
  const Vec uf =
      solve_forward(assemble_system(fine, make_field(fine, 0.42), z5(fine)), patterns)
          .voltages_mv;
  CHECK((uc - uf).norm() / uf.norm() < 0.01);
}

TEST_CASE("raising conductivity lowers drive voltage magnitudes") {
  const Mesh m = small_disk();
  const auto z = uniform_contact_impedance(m.n_electrodes(), 5e-6);
  const auto patterns = adjacent_patterns(m.n_electrodes(), 2.0);
  const Vec lo = solve_forward(assemble_system(m, make_field(m, 0.3), z), patterns).voltages_mv;
  const Vec hi = solve_forward(assemble_system(m, make_field(m, 0.5), z), patterns).voltages_mv;
  const int L = m.n_electrodes();
  for (int k = 0; k + 1 < L; ++k) {
    const double drive_lo = std::abs(lo(k * L + k) - lo(k * L + k + 1));
    const double drive_hi = std::abs(hi(k * L + k) - hi(k * L + k + 1));
    CHECK(drive_hi < drive_lo);
  }
}

TEST_CASE("adjoint jacobian matches central finite differences") {
  const Mesh m = small_disk(220, 8, 33);
  FemAssembler assembler(m);
  const auto z = uniform_contact_impedance(8, 5e-6);
  const auto patterns = adjacent_patterns(8, 2.0);

  Rng rng(17);
  Vec sigma(m.n_elements());
  for (int e = 0; e < m.n_elements(); ++e) sigma(e) = 0.3 + 0.4 * rng.uniform();

  const auto sys = assembler.assemble(make_field(m, sigma), z);
  const auto sol = solve_forward(sys, patterns);
  const Mat jac = jacobian(sys, sol);

  Mat fd(jac.rows(), jac.cols());
  for (int e = 0; e < m.n_elements(); ++e) {
    const double h = 1e-6 * sigma(e);
    Vec sp = sigma, sm = sigma;
    sp(e) += h;
    sm(e) -= h;
    const Vec up =
        solve_forward(assembler.assemble(make_field(m, sp), z), patterns).voltages_mv;
    const Vec um =
        solve_forward(assembler.assemble(make_field(m, sm), z), patterns).voltages_mv;
    fd.col(e) = (up - um) / (2.0 * h);
  }
  const double scale = fd.cwiseAbs().maxCoeff();
  CHECK((jac - fd).cwiseAbs().maxCoeff() / scale < 1e-4);
  // relative Frobenius error
  CHECK((jac - fd).norm() / fd.norm() < 1e-4);
}

TEST_CASE("jacobian inherits the disk's electrode-shift symmetry") {
  const int L = 8;
  const Mesh m = small_disk(260, L, 9);
  const auto sys =
      assemble_system(m, make_field(m, 0.42), uniform_contact_impedance(L, 5e-6));
  const auto sol = solve_forward(sys, adjacent_patterns(L, 2.0));
  const Mat jac = jacobian(sys, sol);

  // element permutation under rotation by one electrode sector
  const double dtheta = 2.0 * std::numbers::pi / L;
  const Eigen::Rotation2Dd rot(dtheta);
  std::vector<int> perm(static_cast<std::size_t>(m.n_elements()), -1);
  for (int e = 0; e < m.n_elements(); ++e) {
    const Vec2 target = rot * m.element_centroid(e);
    int best = -1;
    double best_d = 1e30;
    for (int f = 0; f < m.n_elements(); ++f) {
      const double d = (m.element_centroid(f) - target).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    REQUIRE(std::sqrt(best_d) < 1e-6 * 140.0);
    perm[static_cast<std::size_t>(e)] = best;
  }

  const double scale = jac.cwiseAbs().maxCoeff();
  const int K = sol.n_patterns;
  double worst = 0.0;
  for (int k = 0; k + 1 < K; ++k)
    for (int l = 0; l < L; ++l)
      for (int e = 0; e < m.n_elements(); ++e) {
        const double a = jac(k * L + l, e);
        const double b = jac((k + 1) * L + (l + 1) % L, perm[static_cast<std::size_t>(e)]);
        worst = std::max(worst, std::abs(a - b));
      }
  CHECK(worst / scale < 1e-6);
}

TEST_CASE("jacobian is deterministic") {
  const Mesh m = small_disk(150);
  const auto sys = assemble_system(m, make_field(m, 0.42),
                                   uniform_contact_impedance(m.n_electrodes(), 5e-6));
  const auto patterns = adjacent_patterns(m.n_electrodes(), 2.0);
  const auto s1 = solve_forward(sys, patterns);
  const auto s2 = solve_forward(sys, patterns);
  CHECK(jacobian(sys, s1) == jacobian(sys, s2));
}

TEST_CASE("mismatched system and solution is a usage error") {
  const Mesh m = small_disk(150);
  FemAssembler assembler(m);
  const auto z = uniform_contact_impedance(m.n_electrodes(), 5e-6);
  const auto sys_a = assembler.assemble(make_field(m, 0.42), z);
  const auto sys_b = assembler.assemble(make_field(m, 0.43), z);
  const auto sol_a = solve_forward(sys_a, adjacent_patterns(m.n_electrodes(), 2.0));
  CHECK_THROWS_AS(jacobian(sys_b, sol_a), UsageError);
}
