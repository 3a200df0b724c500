#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace nevpick;
using namespace testsupport;

namespace {

Matrix szego_half() { return kernel_matrix(KernelSpec::szego(), {pt({0.0}), pt({0.5})}).values; }

TangentialData half_data(cplx w1, cplx w2) { return TangentialData::scalar({pt({0.0}), pt({0.5})}, {w1, w2}); }

Polynomial z1z2() { return Polynomial::monomial({1, 1}); }

AlgebraPresentation cross_algebra() { return AlgebraPresentation::constants_plus_ideal(2, {z1z2()}); }

TangentialData random_tangential(std::mt19937_64& rng, int d, int n, int m, double radius, double wmax) {
  TangentialData data;
  for (int i = 0; i < n; ++i) {
    data.points.push_back(random_ball_point(rng, d, radius));
    Vector v = random_vector(rng, m);
    data.directions.push_back(v / v.norm());
    data.targets.push_back(random_disk(rng, wmax));
  }
  return data;
}

KernelSpec ball_kernel(int d) { return d == 1 ? KernelSpec::szego() : KernelSpec::drury_arveson(d); }

}  // namespace

// pick

TEST(Pick, MatrixExamples) {
  const Matrix k = szego_half();
  auto p = pick_matrix(k, half_data(0.0, 0.5), 1.0).entries;
  EXPECT_LT((p - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  p = pick_matrix(k, half_data(0.0, 1.0), 2.0).entries;
  EXPECT_LT((p - 4.0 * Matrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  std::mt19937_64 rng(21);
  const auto data = random_tangential(rng, 2, 4, 1, 0.8, 0.0);
  TangentialData unit = data;
  for (auto& v : unit.directions) v = Vector::Ones(1);
  const Matrix kd = kernel_matrix(KernelSpec::drury_arveson(2), data.points).values;
  EXPECT_EQ(pick_matrix(kd, unit, 1.0).entries, kd);
}

TEST(Pick, SolvabilityExamples) {
  const Matrix k = szego_half();
  auto r = solvability(k, half_data(0.0, 0.5));
  EXPECT_TRUE(r.solvable);
  EXPECT_NEAR(r.lambda_min, 0.0, 1e-14);
  EXPECT_FALSE(solvability(k, half_data(0.0, 1.0)).solvable);
  const auto one = TangentialData::scalar({pt({0.7})}, {cplx(0.6, 0.8)});
  EXPECT_TRUE(solvability(kernel_matrix(KernelSpec::szego(), one.points).values, one).solvable);
}

TEST(Pick, MinNormExamples) {
  const Matrix k = szego_half();
  auto r = min_norm(k, half_data(0.0, 1.0));
  EXPECT_NEAR(r.t, 2.0, 1e-12);
  EXPECT_EQ(r.method, "pencil");
  r = min_norm(k, half_data(0.0, 0.0));
  EXPECT_EQ(r.t, 0.0);
  const auto one = TangentialData::scalar({pt({0.3})}, {cplx(1.2, -0.5)});
  EXPECT_NEAR(min_norm(kernel_matrix(KernelSpec::szego(), one.points).values, one).t, 1.3, 1e-12);
}

TEST(Pick, MinNormDegenerate) {
  // repeated point, consistent targets: singular A, bisection path
  const auto same = TangentialData::scalar({pt({0.3}), pt({0.3})}, {0.5, 0.5});
  const Matrix k = kernel_matrix(KernelSpec::szego(), same.points).values;
  const auto r = min_norm(k, same);
  EXPECT_EQ(r.method, "bisection");
  EXPECT_NEAR(r.t, 0.5, 1e-9);
  // repeated point, different targets: no finite norm
  const auto clash = TangentialData::scalar({pt({0.3}), pt({0.3})}, {0.5, 0.2});
  EXPECT_THROW(min_norm(k, clash), UnboundedError);
}

TEST(Pick, ValidationErrors) {
  TangentialData d = half_data(0.0, 1.0);
  d.directions[1] = Vector::Zero(1);
  EXPECT_THROW(d.validate(), InputError);
  d = half_data(0.0, 1.0);
  d.targets.pop_back();
  EXPECT_THROW(d.validate(), InputError);
  EXPECT_THROW(pick_matrix(Matrix::Identity(3, 3), half_data(0.0, 1.0), 1.0), InputError);
}

TEST(Pick, PropertySuite) {
  std::mt19937_64 rng(22);
  for (int c = 0; c < 100; ++c) {
    const int d = 1 + c % 3, n = 2 + c % 4, m = 1 + c % 3;
    const auto data = random_tangential(rng, d, n, m, 0.85, 1.2);
    const Matrix k = kernel_matrix(ball_kernel(d), data.points).values;

    // Schur product: PSD kernel times PSD data matrix
    TangentialData small = data;
    for (int i = 0; i < n; ++i) small.targets[i] = 0.3 * random_disk(rng, 1.0) / std::sqrt(double(n));
    Matrix dm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dm(i, j) = inner(small.directions[j], small.directions[i]) - small.targets[i] * std::conj(small.targets[j]);
    if (min_eig(dm) >= 0.0) EXPECT_TRUE(solvability(k, small).solvable);

    // gauge: (lambda v, conj(lambda) w) and a global target phase
    TangentialData moved = data;
    const cplx global = random_unimodular(rng);
    for (int i = 0; i < n; ++i) {
      const cplx u = random_unimodular(rng);
      moved.directions[i] *= u;
      moved.targets[i] *= std::conj(u) * global;
    }
    const auto a = solvability(k, data), b = solvability(k, moved);
    EXPECT_EQ(a.solvable, b.solvable);
    EXPECT_NEAR(a.lambda_min, b.lambda_min, 1e-10 * a.scale);
    const auto ta = min_norm(k, data), tb = min_norm(k, moved);
    EXPECT_NEAR(ta.t, tb.t, 1e-10 * std::max(1.0, ta.t));

    // monotone in t and pencil consistency
    const double t = ta.t;
    const auto at = linalg::is_psd(pick_matrix(k, data, t).entries);
    EXPECT_TRUE(at.psd);
    EXPECT_LE(at.lambda_min, 1e-9 * linalg::inf_norm(pick_matrix(k, data, t).entries));
    EXPECT_GE(at.lambda_min, -1e-9 * at.scale);
    for (double f : {1.01, 1.5, 3.0}) EXPECT_TRUE(linalg::is_psd(pick_matrix(k, data, t * f).entries).psd);
    EXPECT_FALSE(linalg::is_psd(pick_matrix(k, data, t * 0.99).entries).psd);
  }
}

TEST(Pick, FamilySolvabilityTakesTheWorst) {
  const Matrix k = szego_half();
  const auto data = half_data(0.0, 0.6);
  const Matrix flat = Matrix::Ones(2, 2);
  const auto r = solvability(std::vector<Matrix>{flat, k}, data);
  ASSERT_EQ(r.per_kernel.size(), 2u);
  EXPECT_FALSE(r.solvable);
  EXPECT_EQ(r.worst, 0);
}

// realization

TEST(Realization, Examples) {
  const cplx c(0.3, -0.4);
  const auto one = TangentialData::scalar({pt({0.2})}, {c});
  // at t = |c| the constant is the only interpolant
  const auto r1 = solve_interpolant(embed_points(KernelSpec::szego(), one.points, Point::Zero(1)), one, std::abs(c));
    for (double x : {-0.7, 0.0, 0.4}) EXPECT_NEAR(std::abs(r1.eval(pt({x}))(0) - c), 0.0, 1e-14);

  const auto emb = embed_points(KernelSpec::szego(), {pt({0.0}), pt({0.5})}, Point::Zero(1));
  const auto r2 = solve_interpolant(emb, half_data(0.0, 0.5), 1.0);
  EXPECT_LT(std::abs(r2.eval_at(0)(0)), 1e-6);
  EXPECT_LT(std::abs(r2.eval_at(1)(0) - 0.5), 1e-6);
  EXPECT_LE(r2.certificate.colligation_norm, 1.0 + 1e-8);
  // equality case forces F(z) = z
  EXPECT_LT(std::abs(r2.eval(pt({0.3}))(0) - 0.3), 1e-8);

  const auto r3 = solve_interpolant(emb, half_data(0.0, 1.0), 2.0);
  EXPECT_LT(std::abs(r3.eval_at(0)(0)), 1e-6);
  EXPECT_LT(std::abs(r3.eval_at(1)(0) - 1.0), 1e-6);
  EXPECT_NEAR(r3.certificate.norm_bound, 2.0, 1e-8);
  EXPECT_THROW(solve_interpolant(emb, half_data(0.0, 1.0), 1.0), InfeasibleError);
}

TEST(Realization, SeriesMatchesEvaluation) {
  std::mt19937_64 rng(23);
  const auto data = random_tangential(rng, 2, 3, 2, 0.6, 0.5);
  const auto r = solve_interpolant(embed_points(KernelSpec::drury_arveson(2), data.points, Point::Zero(2)), data,
                                   std::max(1.0, 1.1 * min_norm(kernel_matrix(KernelSpec::drury_arveson(2), data.points).values, data).t));
  const auto series = r.series(40);
  const Point x = pt({0.1, -0.15});
  const Vector g = r.eval(x);
  for (int l = 0; l < 2; ++l) EXPECT_LT(std::abs(series[l].eval(x) - g(l)), 1e-12);
}

TEST(Realization, SoundnessSuite) {
  std::mt19937_64 rng(24);
  const auto s2 = make_space(2, 8);
  int done = 0;
  while (done < 100) {
    const int m = 1 + done % 2, n = 2 + done % 3;
    const auto data = random_tangential(rng, 2, n, m, 0.85, 1.5);
    const auto da = KernelSpec::drury_arveson(2);
    const Matrix k = kernel_matrix(da, data.points).values;
    const double t = 1.1 * std::max(min_norm(k, data).t, 0.2);
    if (!(min_eig(pick_matrix(k, data, t).entries) > 1e-3)) continue;
    const auto r = solve_interpolant(embed_points(da, data.points, Point::Zero(2)), data, t);
    for (int i = 0; i < n; ++i)
      EXPECT_LT(std::abs(r.eval(data.points[i]).dot(data.directions[i]) - std::conj(data.targets[i])), 1e-6);
    EXPECT_LE(r.certificate.colligation_norm, 1.0 + 1e-8);
    EXPECT_LE(truncated_multiplier_norm(s2, r.series(8)), t * (1.0 + 1e-6));
    ++done;
  }
}

TEST(Realization, DirichletThroughEmbedding) {
  std::mt19937_64 rng(25);
  for (int c = 0; c < 30; ++c) {
    TangentialData data;
    for (int i = 0; i < 3; ++i) data.points.push_back(pt({random_disk(rng, 0.8)}));
    data.directions.assign(3, Vector::Ones(1));
    for (int i = 0; i < 3; ++i) data.targets.push_back(random_disk(rng, 1.0));
    const auto spec = KernelSpec::dirichlet();
    const Matrix k = kernel_matrix(spec, data.points).values;
    const double t = 1.05 * min_norm(k, data).t;
    const auto r = solve_interpolant(embed_points(spec, data.points, default_base(spec, data.points)), data, t);
    EXPECT_LT(r.certificate.max_residual, 1e-6);
    EXPECT_LE(r.certificate.colligation_norm, 1.0 + 1e-8);
    EXPECT_FALSE(r.embedding.can_map_points());
  }
}

// corona

TEST(Corona, LowerBoundExamples) {
  CoronaProblem p;
  p.entries = {Polynomial::coordinate(1, 0), Polynomial::constant(1, 0.5)};
  for (int n = 1; n <= 12; ++n) EXPECT_NEAR(corona_lower_bound(make_space(1, n), p).delta_hat, 0.5, 1e-12);
  CoronaProblem unit;
  unit.entries = {Polynomial::constant(2, 1.0)};
  EXPECT_NEAR(corona_lower_bound(make_space(2, 4), unit).delta_hat, 1.0, 1e-12);
  CoronaProblem coords;
  coords.entries = {Polynomial::coordinate(2, 0), Polynomial::coordinate(2, 1)};
  EXPECT_LT(corona_lower_bound(make_space(2, 6), coords).delta_hat, 1e-12);
}

TEST(Corona, SweepIsNonincreasing) {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> g;
  for (int c = 0; c < 30; ++c) {
    CoronaProblem p;
    for (int k = 0; k < 2; ++k) {
      Polynomial f(2);
      for (const auto& a : make_space(2, 2).monomials) f.add_term(a, cplx(g(rng), g(rng)));
      p.entries.push_back(f);
    }
    const auto b = corona_lower_bound(make_space(2, 8), p);
    ASSERT_GE(b.sweep.size(), 2u);
    for (std::size_t k = 1; k < b.sweep.size(); ++k) EXPECT_GE(b.sweep[k].second, b.sweep[k - 1].second - 1e-12);
  }
}

TEST(Corona, CheckPointsExamples) {
  const std::vector<Point> pts = {pt({0.0}), pt({0.5})};
  CoronaProblem p;
  p.entries = {Polynomial::coordinate(1, 0), Polynomial::constant(1, 0.5)};
  const auto rows = p.rows_at(pts);
  const auto ok = corona_check_points(szego_half(), pts, rows, 0.5);
  EXPECT_TRUE(ok.psd);
  Matrix want = Matrix::Zero(2, 2);
  want(1, 1) = 1.0 / 3.0;
  EXPECT_LT((ok.pick - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(corona_check_points(szego_half(), pts, rows, 0.9).psd);
  const std::vector<RowVector> ones(2, RowVector::Ones(1));
  for (double d : {0.2, 0.7, 1.0}) EXPECT_TRUE(corona_check_points(szego_half(), pts, ones, d).psd);
  EXPECT_NEAR(corona_delta_search(szego_half(), pts, rows), 0.5, 1e-6);
}

TEST(Corona, SolvePointsExamples) {
  const std::vector<Point> pts = {pt({0.0}), pt({0.5})};
  CoronaProblem p;
  p.entries = {Polynomial::coordinate(1, 0), Polynomial::constant(1, 0.5)};
  const auto g = corona_solve_points(embed_points(KernelSpec::szego(), pts, Point::Zero(1)), pts, p.rows_at(pts), 0.5);
  EXPECT_LT(g.certificate.max_residual, 1e-8);
  EXPECT_LE(g.certificate.norm_bound, 2.0 * (1 + 1e-8));

  const cplx c(0.6, 0.0);
  const std::vector<Point> one = {pt({0.4})};
  const auto gc = corona_solve_points(embed_points(KernelSpec::szego(), one, Point::Zero(1)), one,
                                      {RowVector::Constant(1, c)}, 0.6);
  EXPECT_NEAR(std::abs(gc.eval_at(0)(0) - 1.0 / c), 0.0, 1e-12);
  EXPECT_NEAR(gc.certificate.norm_bound, 1.0 / 0.6, 1e-12);

  RowVector f(3);
  f << cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.0, 0.5);
  const auto gs = corona_solve_points(embed_points(KernelSpec::drury_arveson(2), {pt({0.2, 0.1})}, Point::Zero(2)),
                                      {pt({0.2, 0.1})}, {f}, f.norm());
  const Vector want = f.adjoint() / f.squaredNorm();
  EXPECT_LT((gs.eval_at(0) - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(gs.certificate.norm_bound, 1.0 / f.norm(), 1e-12);
}

TEST(Corona, ReductionAndSolveSuite) {
  std::mt19937_64 rng(27);
  for (int c = 0; c < 100; ++c) {
    const int d = 1 + c % 2, n = 2 + c % 4, len = 1 + c % 3;
    std::vector<Point> pts;
    std::vector<RowVector> rows;
    for (int i = 0; i < n; ++i) {
      pts.push_back(random_ball_point(rng, d, 0.8));
      rows.push_back(random_vector(rng, len).transpose());
    }
    const Matrix k = kernel_matrix(ball_kernel(d), pts).values;
    const double delta = std::uniform_real_distribution<double>(0.05, 1.5)(rng);
    const auto check = corona_check_points(k, pts, rows, delta);
    const auto via_pick = solvability(k, corona_data(pts, rows, delta));
    EXPECT_EQ(check.psd, via_pick.solvable);
    EXPECT_EQ(check.lambda_min, via_pick.lambda_min);
    if (check.psd) {
      const auto g = corona_solve_points(embed_points(ball_kernel(d), pts, Point::Zero(d)), pts, rows, delta);
      EXPECT_LT(g.certificate.max_residual, 1e-6);
      EXPECT_LE(g.certificate.norm_bound, (1.0 / delta) * (1 + 1e-8));
    }
    // delta monotone
    bool failed = false;
    for (int s = 1; s <= 20; ++s) {
      const bool ok = corona_check_points(k, pts, rows, 0.1 * s).psd;
      if (failed) EXPECT_FALSE(ok);
      failed = failed || !ok;
    }
  }
}

TEST(Corona, SubalgebraExamples) {
  const auto s = make_space(2, 6);
  CoronaProblem p;
  p.kernel = KernelSpec::drury_arveson(2);
  p.algebra = cross_algebra();
  p.entries = {Polynomial::constant(2, 0.5), z1z2()};
  const std::vector<Polynomial> comp = {Polynomial::constant(2, 1.0), Polynomial::coordinate(2, 0),
                                        Polynomial::coordinate(2, 1)};
  const auto family = sample_family(s, cross_algebra(), SubspaceFamilySpec::finite_codim_grid(comp, 2));
  std::mt19937_64 rng(28);
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(random_ball_point(rng, 2, 0.8));
  const auto cert = subalgebra_corona_check(s, p, family, pts, 0.5);
  EXPECT_EQ(cert.status, CoronaStatus::Feasible);
  EXPECT_EQ(cert.banner, kSampledFamilyBanner);
  // congruence oracle: Pick = D K^L D^* with D = diag(f2(x_i))
  for (std::size_t m = 0; m < family.size(); ++m) {
    const Matrix kl = compressed_kernel(s, family[m].basis, pts);
    Matrix dk = kl;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dk(i, j) *= z1z2().eval(pts[i]) * std::conj(z1z2().eval(pts[j]));
    const auto direct = corona_check_points(kl, pts, p.rows_at(pts), 0.5);
    EXPECT_LT((direct.pick - dk).cwiseAbs().maxCoeff(), 1e-14);
  }

  CoronaProblem unit;
  unit.kernel = KernelSpec::drury_arveson(2);
  unit.algebra = cross_algebra();
  unit.entries = {Polynomial::constant(2, 1.0)};
  EXPECT_EQ(subalgebra_corona_check(s, unit, family, pts, 1.0).status, CoronaStatus::Feasible);

  CoronaProblem bad;
  bad.kernel = KernelSpec::drury_arveson(2);
  bad.algebra = cross_algebra();
  bad.entries = {z1z2()};
  const std::vector<Point> axis = {pt({0.3, 0.2}), pt({0.5, 0.0})};
  const auto fail = subalgebra_corona_check(s, bad, sample_family(s, cross_algebra(), SubspaceFamilySpec::full_space()),
                                            axis, 0.1);
  EXPECT_EQ(fail.status, CoronaStatus::Infeasible);
  ASSERT_EQ(fail.witnesses.size(), 1u);
  EXPECT_EQ(fail.witnesses[0].label, "full_space");
  EXPECT_EQ(fail.witnesses[0].point, 1);

  CoronaProblem outside;
  outside.kernel = KernelSpec::drury_arveson(2);
  outside.algebra = cross_algebra();
  outside.entries = {Polynomial::coordinate(2, 0)};
  EXPECT_THROW(subalgebra_corona_check(s, outside, family, pts, 0.5), InputError);
}

TEST(Corona, FamilyCoherence) {
  std::mt19937_64 rng(29);
  const auto s = make_space(2, 4);
  const auto family = sample_family(s, AlgebraPresentation::full(2), SubspaceFamilySpec::full_space());
  for (int c = 0; c < 50; ++c) {
    CoronaProblem p;
    p.kernel = KernelSpec::drury_arveson(2);
    p.entries = {Polynomial::coordinate(2, 0) + Polynomial::constant(2, random_disk(rng, 1.0)),
                 Polynomial::coordinate(2, 1) * random_disk(rng, 1.0)};
    std::vector<Point> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(random_ball_point(rng, 2, 0.8));
    const double delta = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const auto cert = subalgebra_corona_check(s, p, family, pts, delta);
    const auto direct = corona_check_points(kernel_matrix(p.kernel, pts).values, pts, p.rows_at(pts), delta);
    EXPECT_EQ(cert.status == CoronaStatus::Feasible, direct.psd);
    EXPECT_EQ(cert.witnesses[0].lambda_min, direct.lambda_min);
  }
}

TEST(Corona, UnnormedInterpolant) {
  const auto s = make_space(1, 6);
  const std::vector<Point> pts = {pt({0.1}), pt({-0.3}), pt({0.5})};
  const auto data = TangentialData::scalar(pts, {0.2, cplx(0.0, 1.0), -1.5});
  const auto col = subalgebra_interpolant_unnormed(s, AlgebraPresentation::full(1), data, pts);
  ASSERT_EQ(col.size(), 1u);
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(col[0].eval(pts[i]) - data.targets[i]), 1e-8);

  const auto s2 = make_space(2, 6);
  const std::vector<Point> cross = {pt({0.5, 0.0}), pt({0.0, 1.0 / 3.0})};
  const auto same = subalgebra_interpolant_unnormed(s2, cross_algebra(), TangentialData::scalar(cross, {0.7, 0.7}), cross);
  EXPECT_LE(same[0].degree(), 0);
  EXPECT_NEAR(std::abs(same[0].coefficient({0, 0}) - 0.7), 0.0, 1e-12);
  EXPECT_THROW(subalgebra_interpolant_unnormed(s2, cross_algebra(), TangentialData::scalar(cross, {0.7, 0.1}), cross),
               InfeasibleError);
}

// oracles

TEST(Oracles, SchwarzPickExamples) {
  auto r = schwarz_pick_two_point(0.0, 0.5, 0.0, 0.5);
  EXPECT_TRUE(r.solvable);
  EXPECT_NEAR(r.t_star, 1.0, 1e-14);
  r = schwarz_pick_two_point(0.0, 0.5, 0.0, 1.0);
  EXPECT_FALSE(r.solvable);
  EXPECT_NEAR(r.t_star, 2.0, 1e-14);
  r = schwarz_pick_two_point(0.0, 0.5, cplx(0.3, 0.4), cplx(0.3, 0.4));
  EXPECT_TRUE(r.solvable);
  EXPECT_NEAR(r.t_star, 0.5, 1e-14);
}

TEST(Oracles, ClosedFormAgreesWithBisection) {
  std::mt19937_64 rng(30);
  for (int c = 0; c < 1000; ++c) {
    const cplx x1 = random_disk(rng, 0.9), x2 = random_disk(rng, 0.9), w1 = random_disk(rng, 2.0),
               w2 = random_disk(rng, 2.0);
    const auto r = schwarz_pick_two_point(x1, x2, w1, w2);
    EXPECT_EQ(r.solvable, sp_solvable(x1, x2, w1, w2, 1.0));
    EXPECT_NEAR(r.t_star, sp_min_norm(x1, x2, w1, w2), 1e-9);
  }
}

TEST(Oracles, BruteForceExamples) {
  const auto s = make_space(1, 8);
  BruteForceOptions quick;
  quick.iterations = 500;
  quick.restarts = 3;
  auto r = brute_force_distance(s, half_data(0.0, 0.0), 8, quick);
  EXPECT_EQ(r.lower, 0.0);
  EXPECT_NEAR(r.upper, 0.0, 1e-12);
  r = brute_force_distance(s, half_data(0.0, 1.0), 8);
  EXPECT_NEAR(r.lower, 2.0, 5e-2);
  EXPECT_NEAR(r.upper, 2.0, 5e-2);
  EXPECT_GE(r.upper, r.lower - 1e-9);
  const cplx c(0.3, -0.9);
  r = brute_force_distance(s, TangentialData::scalar({pt({0.4})}, {c}), 8, quick);
  EXPECT_NEAR(r.lower, std::abs(c), 1e-6);
  EXPECT_NEAR(r.upper, std::abs(c), 1e-6);
  EXPECT_THROW(brute_force_distance(s, half_data(0.0, 1.0), 9, quick), InputError);
}

TEST(Oracles, BruteForceSandwichAndDeterminism) {
  std::mt19937_64 rng(31);
  BruteForceOptions opt;
  opt.iterations = 400;
  opt.restarts = 4;
  for (int c = 0; c < 6; ++c) {
    const int d = 1 + c % 2;
    const auto s = make_space(d, d == 1 ? 8 : 5);
    const auto data = random_tangential(rng, d, 2 + c % 2, 1, 0.6, 0.8);
    const auto a = brute_force_distance(s, data, s.max_degree, opt);
    const auto b = brute_force_distance(s, data, s.max_degree, opt);
    EXPECT_GE(a.upper, a.lower - 1e-9);
    EXPECT_EQ(a.upper, b.upper);
    EXPECT_EQ(a.report.values, b.report.values);
  }
}

TEST(Oracles, FamilyGridExamples) {
  const auto s = make_space(2, 6);
  const std::vector<Polynomial> comp = {Polynomial::constant(2, 1.0), Polynomial::coordinate(2, 0),
                                        Polynomial::coordinate(2, 1)};
  CoronaProblem p;
  p.kernel = KernelSpec::drury_arveson(2);
  p.entries = {Polynomial::constant(2, 0.5), z1z2()};
  const std::vector<Point> pts = {pt({0.3, 0.2}), pt({-0.1, 0.4}), pt({0.5, 0.0})};
  auto g = family_grid_check(s, cross_algebra(), comp, 1, p, pts, 0.5);
  EXPECT_TRUE(g.pass);
  EXPECT_EQ(g.count, 1u);
  EXPECT_GE(g.worst_lambda_min, -1e-12);

  p.algebra = cross_algebra();
  const auto single = subalgebra_corona_check(
      s, p, sample_family(s, cross_algebra(), SubspaceFamilySpec::finite_codim_grid(comp, 1)), pts, 0.5);
  EXPECT_EQ(single.witnesses[0].lambda_min, g.worst_lambda_min);

  CoronaProblem bad;
  bad.kernel = KernelSpec::drury_arveson(2);
  bad.entries = {z1z2()};
  g = family_grid_check(s, cross_algebra(), comp, 2, bad, pts, 0.1);
  EXPECT_FALSE(g.pass);
  EXPECT_LT(g.worst_lambda_min, 0.0);
  EXPECT_FALSE(g.worst_point.empty());
}
