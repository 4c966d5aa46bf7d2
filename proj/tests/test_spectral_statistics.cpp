#include <doctest.h>

#include <random>

#include "bhchaos/error.hpp"
#include "bhchaos/spectral_statistics.hpp"

using namespace bhchaos;

namespace {

std::vector<double> poisson_levels(std::size_t n, unsigned seed) {
  std::mt19937_64 engine(seed);
  std::exponential_distribution<double> gap(1.0);
  std::vector<double> out{0.0};
  while (out.size() < n) out.push_back(out.back() + gap(engine));
  return out;
}

std::vector<double> goe_levels(int n, unsigned seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = normal(engine);
  const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
  return diagonalize(h, "goe");
}

double integrate(double (*f)(double), double a, double b, double moment = 0.0) {
  const int n = 20000;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = a + (b - a) * (k + 0.5) / n;
    total += std::pow(x, moment) * f(x);
  }
  return total * (b - a) / n;
}

}  // namespace

TEST_CASE("reference distributions are normalized") {
  CHECK(integrate(wigner_surmise, 0.0, 20.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate(wigner_surmise, 0.0, 20.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate(poisson_spacing, 0.0, 50.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate(goe_gap_ratio_density, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(integrate(poisson_gap_ratio_density, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate(poisson_gap_ratio_density, 0.0, 1.0, 1.0) ==
        doctest::Approx(kPoissonMeanGapRatio).epsilon(1e-6));
}

TEST_CASE("gap ratio of an uncorrelated sequence") {
  const auto levels = poisson_levels(40000, 7);
  CHECK(mean_gap_ratio(levels) == doctest::Approx(kPoissonMeanGapRatio).epsilon(0.02));
}

TEST_CASE("gap ratio of a GOE matrix") {
  const auto levels = goe_levels(800, 11);
  const auto unfolded = unfold(levels);
  CHECK(mean_gap_ratio(unfolded.levels) == doctest::Approx(kGoeMeanGapRatio).epsilon(0.03));
  const auto h = spacing_statistics(unfolded.levels, SpacingMode::spacing);
  CHECK(h.chi2_wigner * 5.0 < h.chi2_poisson);
}

TEST_CASE("unfolding gives unit mean spacing") {
  const auto levels = goe_levels(600, 3);
  const auto unfolded = unfold(levels, 6, 0.8);
  const auto n = unfolded.levels.size();
  CHECK(n == doctest::Approx(480).epsilon(0.01));
  const double mean = (unfolded.levels.back() - unfolded.levels.front()) / double(n - 1);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("unfolding is invariant under affine maps") {
  const auto levels = goe_levels(300, 5);
  std::vector<double> mapped;
  for (const double e : levels) mapped.push_back(2.5 * e - 7.0);
  const auto a = unfold(levels).levels;
  const auto b = unfold(mapped).levels;
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-8));
}

TEST_CASE("gap ratio is scale free") {
  const auto levels = poisson_levels(500, 1);
  std::vector<double> mapped;
  for (const double e : levels) mapped.push_back(-3.0 * e + 1.0);
  std::sort(mapped.begin(), mapped.end());
  CHECK(mean_gap_ratio(levels) == doctest::Approx(mean_gap_ratio(mapped)).epsilon(1e-12));
}

TEST_CASE("density of states recovers a gaussian") {
  std::mt19937_64 engine(99);
  std::normal_distribution<double> normal(3.6, 2.0);
  std::vector<double> levels(50000);
  for (auto& e : levels) e = normal(engine);
  std::sort(levels.begin(), levels.end());
  const auto dos = density_of_states(levels, 60);
  CHECK(dos.mean == doctest::Approx(3.6).epsilon(0.01));
  CHECK(dos.stddev == doctest::Approx(2.0).epsilon(0.01));
  CHECK(dos.integral(-100.0, 100.0) == doctest::Approx(50000.0).epsilon(1e-6));
  double counted = 0.0;
  for (std::size_t b = 0; b < dos.density.size(); ++b) counted += dos.density[b] * (dos.edges[b + 1] - dos.edges[b]);
  CHECK(counted == doctest::Approx(50000.0));
}

TEST_CASE("statistics errors") {
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS(mean_gap_ratio(two));
  const std::vector<double> flat(10, 1.0);
  CHECK_THROWS_AS(density_of_states(flat, 10), NumericalError);
  CHECK_THROWS(density_of_states(poisson_levels(10, 1), 1));
}

TEST_CASE("block selection parsing") {
  CHECK(BlockSelection::parse("all").kind == BlockSelection::Kind::all);
  CHECK(BlockSelection::parse("groups").kind == BlockSelection::Kind::one_per_group);
  const auto list = BlockSelection::parse("1,9-even");
  CHECK(list.kind == BlockSelection::Kind::list);
  CHECK(list.to_string() == "1,9-even");
}
