#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "rcon/analysis.hpp"
#include "rcon/engine.hpp"

using namespace rcon;

namespace {

NoiseFunctionals fake_functionals(double e_f_sq, double e_f_prime, double sup_var,
                                  double fisher = 1.0) {
    NoiseFunctionals fn;
    fn.e_f_squared = e_f_sq;
    fn.e_f_prime = e_f_prime;
    fn.ratio = e_f_sq / (e_f_prime * e_f_prime);
    fn.sup_var = sup_var;
    fn.fisher_info = fisher;
    return fn;
}

// Minimize phi(a) by ternary search on [lo, hi] (phi unimodal there).
template <class F>
double ternary_min(F&& phi, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (phi(m1) < phi(m2))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sigma_n_sq closed forms") {
    CHECK_THAT(sigma_n_sq(Graph::complete(4), fake_functionals(1.0, 1.0, 1.0)),
               Catch::Matchers::WithinRel(0.75, 1e-15));
    CHECK_THAT(sigma_n_sq(Graph::ring(10), fake_functionals(0.5, 1.0, 1.0)),
               Catch::Matchers::WithinRel(0.1, 1e-15));
}

TEST_CASE("sigma_n_sq matches the one-step noise variance at consensus") {
    const Graph g = Graph::star(5);
    const ReceiveMap f = ReceiveMap::tanh_scaled(1.0);
    const NoiseModel noise = NoiseModel::laplacian(1.0);
    const auto fn = functionals(noise, f);
    const double predicted = sigma_n_sq(g, fn);

    // Monte Carlo oracle: repeated single steps from a consensus state; the
    // mean increment at alpha = 1 is exactly -(1/N) sum_ij f(-n_ij).
    const int reps = 20'000;
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(5, 2.0);
    double s = 0.0, s2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        ChannelNoise src{&noise, 321, static_cast<std::uint64_t>(rep), 0};
        const Eigen::VectorXd next =
            rc_step(x, g, TransmitMap::identity(), f, 1.0, src);
        const double v = next.mean() - 2.0;
        s += v;
        s2 += v * v;
    }
    const double var = s2 / reps - (s / reps) * (s / reps);
    const double se = var * std::sqrt(2.0 / reps);
    CHECK(std::fabs(var - predicted) < 3.0 * se);
}

TEST_CASE("two-node covariance matches the hand evaluation") {
    // N=2, single edge, h=f=identity, gaussian(1), a=1:
    //   sigma_n^2 = 1/2, margin = 3, s = 2*(1/2)/3 = 1/3,
    //   c_rc = [[2/3, 1/3], [1/3, 2/3]], norm = 1.
    const Graph g = Graph::from_edges(2, {{0, 1}});
    const Spectrum sp = spectrum(g);
    const auto fn = functionals(NoiseModel::gaussian(1.0), ReceiveMap::identity());
    const auto rep = asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0, 1.0);
    CHECK_THAT(rep.stability_margin, Catch::Matchers::WithinRel(3.0, 1e-12));
    CHECK_THAT(rep.s_diag(0), Catch::Matchers::WithinRel(1.0 / 3.0, 1e-12));
    CHECK_THAT(rep.c_rc(0, 0), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    CHECK_THAT(rep.c_rc(0, 1), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    CHECK_THAT(rep.c_rc_norm, Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("covariance norm diverges as the margin closes") {
    const Graph g = Graph::ring(6);
    const Spectrum sp = spectrum(g);
    const auto fn = fake_functionals(0.5, 1.0, 0.5);
    const double threshold = 1.0 / (2.0 * sp.lambda2());
    const auto rep = asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0,
                                           threshold * (1.0 + 1e-9));
    CHECK(rep.c_rc_norm > 1e6);
    CHECK_THROWS_AS(
        asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0, threshold * 0.99),
        precondition_error);
    CHECK_THROWS_MATCHES(
        asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0, threshold * 0.99),
        precondition_error, Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                                "stability violated")));
}

TEST_CASE("complete graph has a flat rotated covariance") {
    const Graph g = Graph::complete(7);
    const Spectrum sp = spectrum(g);
    const auto fn = fake_functionals(1.0, 1.0, 1.0);
    const auto rep = asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0, 0.5);
    for (int i = 1; i < rep.s_diag.size(); ++i)
        CHECK_THAT(rep.s_diag(i), Catch::Matchers::WithinRel(rep.s_diag(0), 1e-12));
}

TEST_CASE("degenerate transmit derivative is rejected") {
    const Graph g = Graph::ring(6);
    const Spectrum sp = spectrum(g);
    const auto fn = fake_functionals(1.0, 1.0, 1.0);
    const TransmitMap clip = TransmitMap::linear_clip(4.0);  // h'(theta0) = 0 beyond the knee
    CHECK_THROWS_AS(optimal_gain(g, sp, fn, clip, 10.0), precondition_error);
    CHECK_THROWS_AS(asymptotic_covariance(g, sp, fn, clip, 10.0, 1.0), precondition_error);
}

TEST_CASE("optimal gain satisfies the stability identity") {
    const Graph g = Graph::erdos_renyi(12, 0.5, 17);
    const Spectrum sp = spectrum(g);
    const auto fn = functionals(NoiseModel::cauchy(0.413), ReceiveMap::rational(2.0));
    const TransmitMap h = TransmitMap::scaled_atan(10.0, 0.05);
    const double theta0 = 3.0;
    const auto og = optimal_gain(g, sp, fn, h, theta0);
    const double check =
        2.0 * og.a_star * fn.e_f_prime * h.deriv(theta0) * sp.lambda2();
    CHECK_THAT(check, Catch::Matchers::WithinRel((12.0 + 1.0) / 12.0, 1e-12));
    CHECK(check > 1.0);
}

TEST_CASE("numeric minimization of the norm objective reproduces the closed forms") {
    // Two routes to the optimum: the closed forms, and a direct numeric
    // minimization of J(a) = max(a^2 s2, a^2 s2 / (N (2 a b l2 - 1))).
    const Graph g = Graph::erdos_renyi(15, 0.4, 23);
    const Spectrum sp = spectrum(g);
    const auto fn = functionals(NoiseModel::laplacian(1.0), ReceiveMap::tanh_scaled(2.0));
    const TransmitMap h = TransmitMap::identity();
    const double n = g.node_count();
    const double b = fn.e_f_prime;
    const double l2 = sp.lambda2();
    const double s2 = sigma_n_sq(g, fn);
    const auto objective = [&](double a) {
        const double margin = 2.0 * a * b * l2 - 1.0;
        return std::max(a * a * s2, a * a * s2 / (n * margin));
    };
    const auto og = optimal_gain(g, sp, fn, h, 0.0);
    const double lo = (1.0 + 1e-9) / (2.0 * b * l2);
    const double a_num = ternary_min(objective, lo, 10.0 * og.a_star);
    CHECK_THAT(a_num, Catch::Matchers::WithinRel(og.a_star, 1e-8));
    CHECK_THAT(objective(a_num), Catch::Matchers::WithinRel(og.c_star_norm, 1e-8));
}

TEST_CASE("covariance at the optimal gain relates to the optimal norm by N^2") {
    // The shipped covariance keeps the node-coordinate normalization, so its
    // norm at a* is exactly N^2 times the reported optimal value.
    for (const Graph& g : {Graph::ring(8), Graph::erdos_renyi(14, 0.4, 31)}) {
        const Spectrum sp = spectrum(g);
        const auto fn = functionals(NoiseModel::gaussian(1.0), ReceiveMap::tanh_scaled(2.0));
        const auto og = optimal_gain(g, sp, fn, TransmitMap::identity(), 0.0);
        const auto rep =
            asymptotic_covariance(g, sp, fn, TransmitMap::identity(), 0.0, og.a_star);
        const double n = g.node_count();
        CHECK_THAT(rep.c_rc_norm, Catch::Matchers::WithinRel(n * n * og.c_star_norm, 1e-8));
    }
}

TEST_CASE("scaling f leaves the optimal performance invariant") {
    const Graph g = Graph::erdos_renyi(10, 0.5, 19);
    const Spectrum sp = spectrum(g);
    const ReceiveMap f = ReceiveMap::tanh_scaled(2.0);
    const NoiseModel noise = NoiseModel::laplacian(1.0);
    const TransmitMap h = TransmitMap::identity();
    const auto base_fn = functionals(noise, f);
    const auto base = optimal_gain(g, sp, base_fn, h, 0.0);
    for (double kappa : {0.5, 2.0, 10.0}) {
        const auto fn = functionals(noise, f.scaled(kappa));
        const auto og = optimal_gain(g, sp, fn, h, 0.0);
        CHECK_THAT(og.c_star_norm, Catch::Matchers::WithinRel(base.c_star_norm, 1e-10));
        CHECK_THAT(og.a_star * fn.e_f_prime,
                   Catch::Matchers::WithinRel(base.a_star * base_fn.e_f_prime, 1e-10));
        CHECK_THAT(fisher_check(fn).ratio,
                   Catch::Matchers::WithinRel(fisher_check(base_fn).ratio, 1e-10));
    }
}

TEST_CASE("optimal norm decreases with algebraic connectivity") {
    const int n = 16;
    const auto fn = functionals(NoiseModel::gaussian(1.0), ReceiveMap::tanh_scaled(2.0));
    std::vector<std::pair<double, double>> points;  // (lambda2, c_star_norm)
    for (const Graph& g : {Graph::line(n), Graph::ring(n), Graph::k_regular_lattice(n, 4),
                           Graph::complete(n)}) {
        const Spectrum sp = spectrum(g);
        const auto og = optimal_gain(g, sp, fn, TransmitMap::identity(), 0.0);
        points.push_back({sp.lambda2(), og.c_star_norm});
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].first > points[i - 1].first);
        CHECK(points[i].second < points[i - 1].second);
    }
}

TEST_CASE("complete vs star optimal norms at the same size") {
    // By Table-1 algebra the quotient is 1/(2N): degree factors contribute
    // N/2, the lambda_2^-2 factors contribute 1/N^2.
    const int n = 20;
    const auto fn = functionals(NoiseModel::gaussian(1.0), ReceiveMap::tanh_scaled(2.0));
    const auto c = optimal_gain(Graph::complete(n), spectrum(Graph::complete(n)), fn,
                                TransmitMap::identity(), 0.0);
    const auto s = optimal_gain(Graph::star(n), spectrum(Graph::star(n)), fn,
                                TransmitMap::identity(), 0.0);
    CHECK_THAT(c.c_star_norm / s.c_star_norm,
               Catch::Matchers::WithinRel(1.0 / (2.0 * n), 1e-12));
}

TEST_CASE("mse bound pieces") {
    // Basel sum: sum_{t>=0} (1/(t+1))^2 = pi^2/6, oracle by partial sums.
    double partial = 0.0;
    for (int t = 0; t < 1'000'000; ++t) partial += 1.0 / ((t + 1.0) * (t + 1.0));
    CHECK_THAT(StepSchedule{1.0}.sum_alpha_sq(), Catch::Matchers::WithinAbs(partial, 2e-6));
    CHECK_THAT(StepSchedule{2.0}.sum_alpha_sq(),
               Catch::Matchers::WithinRel(4.0 * kPi * kPi / 6.0, 1e-15));

    // f bounded by 1 => bound <= d_max a^2 pi^2 / (6N)
    const Graph g = Graph::erdos_renyi(12, 0.5, 3);
    const auto fn = functionals(NoiseModel::cauchy(0.5), ReceiveMap::tanh_scaled(2.0));
    REQUIRE(fn.sup_var <= 1.0);
    const auto mb = mse_bound(g, fn, StepSchedule{1.0});
    CHECK(mb.bound <= g.d_max() * kPi * kPi / (6.0 * 12.0) + 1e-12);
    CHECK_THAT(mb.varrho, Catch::Matchers::WithinRel(12.0 * g.d_max() * fn.sup_var, 1e-15));

    // worked example: N=75, d_max=10, sup_var=0.8, a=1
    const Graph lattice = Graph::k_regular_lattice(75, 10);
    REQUIRE(lattice.d_max() == 10);
    const auto mb2 = mse_bound(lattice, fake_functionals(1.0, 1.0, 0.8), StepSchedule{1.0});
    CHECK_THAT(mb2.bound, Catch::Matchers::WithinAbs(0.17546, 1e-4));
}

TEST_CASE("fisher check values") {
    const auto eq = fisher_check(functionals(NoiseModel::gaussian(1.0), ReceiveMap::identity()));
    CHECK_THAT(eq.ratio, Catch::Matchers::WithinAbs(eq.one_over_j, 1e-8));
    CHECK(eq.satisfied);

    const auto lap = fisher_check(functionals(NoiseModel::laplacian(1.0),
                                              ReceiveMap::tanh_scaled(1.0)));
    CHECK_THAT(lap.ratio, Catch::Matchers::WithinAbs(1.317, 0.005));
    CHECK_THAT(lap.one_over_j, Catch::Matchers::WithinAbs(1.0, 1e-8));
    CHECK(lap.satisfied);

    const auto cau =
        fisher_check(functionals(NoiseModel::cauchy(1.0), ReceiveMap::tanh_scaled(2.0)));
    CHECK(cau.ratio >= 2.0 - 1e-6);
    CHECK_THAT(cau.one_over_j, Catch::Matchers::WithinRel(2.0, 1e-8));
    CHECK(cau.satisfied);
}

TEST_CASE("aggregate report") {
    const Graph g = Graph::erdos_renyi(10, 0.5, 41);
    const Spectrum sp = spectrum(g);
    const auto fn = functionals(NoiseModel::gaussian(1.0), ReceiveMap::tanh_scaled(2.0));
    const auto rep = analyze(g, sp, fn, TransmitMap::identity(), 5.0, StepSchedule{1.0}, true);
    CHECK(rep.gain_is_optimal);
    CHECK_THAT(rep.gain, Catch::Matchers::WithinRel(rep.a_star, 1e-15));
    CHECK(rep.stability_margin > 0.0);
    CHECK(rep.s_diag.size() == 9);
    CHECK(rep.c_rc.rows() == 10);
    CHECK(rep.varrho > 0.0);
    CHECK(rep.fisher_satisfied);
    CHECK_THAT(rep.h_prime_theta0, Catch::Matchers::WithinRel(1.0, 1e-15));
}
