#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <jsnet/johnson.hpp>
#include <jsnet/rng.hpp>

#include "support/oracles.hpp"

using namespace jsnet;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

JohnsonParams params1(FamilyTag f, double gamma, double delta, double lambda, double xi) {
    return {f, vec1(gamma), vec1(delta), vec1(lambda), vec1(xi)};
}

// Table class-1 parameters (dim 1, dim 2).
JohnsonParams table_class1() {
    Eigen::VectorXd gamma(2), delta(2), lambda(2), xi(2);
    gamma << -0.9, 0.5;
    delta << 0.9, 0.8;
    lambda << 0.04, 0.05;
    xi << 0.15, 0.7;
    return {FamilyTag::SU, gamma, delta, lambda, xi};
}

}  // namespace

TEST_CASE("g_eval basic values and domains") {
    CHECK(g_eval(FamilyTag::SU, 0.0) == 0.0);
    CHECK(g_eval(FamilyTag::SN, 1.7) == 1.7);
    CHECK(g_eval(FamilyTag::SU, std::sinh(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g_eval(FamilyTag::SL, 1.0) == 0.0);
    CHECK(g_eval(FamilyTag::SB, 0.5) == 0.0);

    CHECK_THROWS_AS(g_eval(FamilyTag::SL, 0.0), DomainError);
    CHECK_THROWS_AS(g_eval(FamilyTag::SL, -2.0), DomainError);
    CHECK_THROWS_AS(g_eval(FamilyTag::SB, 0.0), DomainError);
    CHECK_THROWS_AS(g_eval(FamilyTag::SB, 1.0), DomainError);
    CHECK_THROWS_AS(g_eval(FamilyTag::SB, 1.5), DomainError);

    try {
        g_eval(FamilyTag::SB, -0.25);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.family() == "SB");
        CHECK(e.value() == -0.25);
    }
}

TEST_CASE("g_prime values") {
    CHECK(g_prime(FamilyTag::SU, 0.0) == 1.0);
    CHECK(g_prime(FamilyTag::SB, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(g_prime(FamilyTag::SN, -3.0) == 1.0);
    CHECK(g_prime(FamilyTag::SL, 2.0) == doctest::Approx(0.5).epsilon(1e-14));

    const double fd = oracle::central_diff([](double y) { return g_eval(FamilyTag::SU, y); }, 0.7, 1e-6);
    CHECK(std::abs(g_prime(FamilyTag::SU, 0.7) - fd) < 1e-8);
}

TEST_CASE("g_prime matches finite differences across each family's domain") {
    const double h = 1e-6;
    auto check_grid = [&](FamilyTag f, const std::vector<double>& grid) {
        for (double y : grid) {
            const double fd = oracle::central_diff([&](double t) { return g_eval(f, t); }, y, h);
            CHECK(oracle::rel_err(fd, g_prime(f, y)) < 1e-7);
        }
    };
    check_grid(FamilyTag::SU, {-5.0, -2.0, -0.5, 0.0, 0.3, 1.0, 4.0});
    check_grid(FamilyTag::SN, {-5.0, -1.0, 0.0, 2.5, 5.0});
    check_grid(FamilyTag::SL, {0.1, 0.5, 1.0, 2.0, 5.0});
    check_grid(FamilyTag::SB, {0.05, 0.2, 0.5, 0.8, 0.95});
}

TEST_CASE("g_inverse values and round trips") {
    CHECK(g_inverse(FamilyTag::SU, 0.0) == 0.0);
    CHECK(g_inverse(FamilyTag::SN, -2.5) == -2.5);
    CHECK(g_inverse(FamilyTag::SL, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-15));

    for (FamilyTag f : {FamilyTag::SL, FamilyTag::SU, FamilyTag::SB, FamilyTag::SN}) {
        for (double u = -20.0; u <= 20.0; u += 0.5) {
            // SB saturates: the logistic rounds y to within ulp(1) of 1, so
            // recovering u = ln(y/(1-y)) is only conditioned to eps*(1+e^|u|).
            const double tol =
                f == FamilyTag::SB ? 1e-15 * (1.0 + std::exp(std::abs(u))) : 1e-12;
            CHECK(std::abs(g_eval(f, g_inverse(f, u)) - u) < tol);
        }
    }
}

TEST_CASE("normalize_transform identity and Table anchor point") {
    const JohnsonParams sn = params1(FamilyTag::SN, 0.0, 1.0, 1.0, 0.0);
    CHECK(normalize_transform(sn, vec1(0.3))[0] == 0.3);

    // x at the location parameter maps to gamma (y=0, g=0).
    const JohnsonParams c1 = table_class1();
    const Eigen::Vector2d at_xi(0.15, 0.7);
    const Eigen::VectorXd z = normalize_transform(c1, at_xi);
    CHECK(z[0] == doctest::Approx(-0.9).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("inverse_transform anchor points") {
    const JohnsonParams c1 = table_class1();
    const Eigen::Vector2d gamma(-0.9, 0.5);
    const Eigen::VectorXd x = inverse_transform(c1, gamma);
    CHECK(x[0] == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.7).epsilon(1e-15));

    const JohnsonParams su = params1(FamilyTag::SU, 0.0, 1.0, 2.0, 1.0);
    CHECK(inverse_transform(su, vec1(std::asinh(3.0)))[0] == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("round trip inverse_transform . normalize_transform per family") {
    Rng rng(7);
    auto run = [&](const JohnsonParams& p, auto draw_x) {
        for (int i = 0; i < 1000; ++i) {
            Eigen::VectorXd x(1);
            x[0] = draw_x();
            const Eigen::VectorXd back = inverse_transform(p, normalize_transform(p, x));
            CHECK(std::abs(back[0] - x[0]) < 1e-10);
            // and the other direction, z -> x -> z
            Eigen::VectorXd z(1);
            z[0] = rng.normal() * 2.0;
            const Eigen::VectorXd zz = normalize_transform(p, inverse_transform(p, z));
            CHECK(std::abs(zz[0] - z[0]) < 1e-10);
        }
    };
    run(params1(FamilyTag::SU, -0.9, 0.9, 0.04, 0.15), [&] { return 0.15 + std::sinh(rng.normal() * 2.0) * 0.04; });
    run(params1(FamilyTag::SN, 0.3, 1.4, 2.0, -1.0), [&] { return rng.normal() * 3.0; });
    run(params1(FamilyTag::SL, 0.1, 1.2, 0.7, 0.5), [&] { return 0.5 + 0.7 * std::exp(rng.normal()); });
    run(params1(FamilyTag::SB, -0.2, 0.8, 1.5, -0.3), [&] { return -0.3 + 1.5 / (1.0 + std::exp(-rng.normal() * 2.0)); });
}

TEST_CASE("normalize_transform names the offending dimension") {
    Eigen::VectorXd gamma(2), delta(2), lambda(2), xi(2);
    gamma << 0.0, 0.0;
    delta << 1.0, 1.0;
    lambda << 1.0, 1.0;
    xi << 0.0, 0.0;
    const JohnsonParams p{FamilyTag::SL, gamma, delta, lambda, xi};
    Eigen::Vector2d x(1.0, -2.0);  // y_2 = -2 outside SL
    try {
        normalize_transform(p, x);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.dimension() == 1);
        CHECK(e.family() == "SL");
    }
}

TEST_CASE("jacobian_logdet closed-form anchors") {
    const JohnsonParams sn = params1(FamilyTag::SN, 0.4, 1.0, 1.0, -0.2);
    CHECK(jacobian_logdet(sn, vec1(0.9)) == 0.0);
    CHECK(jacobian_logdet(sn, vec1(-5.0)) == 0.0);

    // g'(0) = 1, so at x = xi only log(delta/lambda) remains.
    const JohnsonParams c1d1 = params1(FamilyTag::SU, -0.9, 0.9, 0.04, 0.15);
    CHECK(jacobian_logdet(c1d1, vec1(0.15)) == doctest::Approx(std::log(22.5)).epsilon(1e-14));
}

TEST_CASE("jacobian_logdet matches the finite-difference Jacobian determinant") {
    const JohnsonParams c1 = table_class1();
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd z(2);
        z << rng.normal(), rng.normal();
        const Eigen::VectorXd x = inverse_transform(c1, z);
        const Eigen::MatrixXd J = oracle::fd_jacobian(
            [&](const Eigen::VectorXd& t) { return normalize_transform(c1, t); }, x, 1e-6);
        const double fd_det = J.determinant();
        CHECK(oracle::rel_err(std::exp(jacobian_logdet(c1, x)), fd_det) < 1e-5);
    }
}

TEST_CASE("jacobian_logdet finite with positive exp for SU inputs") {
    const JohnsonParams c1 = table_class1();
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd x(2);
        x << rng.normal() * 10.0, rng.normal() * 10.0;
        const double v = jacobian_logdet(c1, x);
        CHECK(std::isfinite(v));
        CHECK(std::exp(v) > 0.0);
    }
}

TEST_CASE("ClassModel validates precision and derives logdet_sigma") {
    const JohnsonParams c1 = table_class1();
    Eigen::Matrix2d sigma;
    sigma << 1.0, 0.6, 0.6, 1.0;
    const ClassModel model(c1, 0.5, sigma.inverse());
    CHECK(model.logdet_sigma == doctest::Approx(std::log(1.0 - 0.36)).epsilon(1e-12));

    Eigen::Matrix2d asym;
    asym << 1.0, 0.2, -0.2, 1.0;
    CHECK_THROWS_AS(ClassModel(c1, 0.5, asym), FactorizationError);

    Eigen::Matrix2d indef;
    indef << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(ClassModel(c1, 0.5, indef), FactorizationError);
}

TEST_CASE("class_log_density standard normal anchor") {
    const ClassModel model(params1(FamilyTag::SN, 0.0, 1.0, 1.0, 0.0), 1.0,
                           Eigen::MatrixXd::Identity(1, 1));
    CHECK(class_log_density(model, vec1(0.0)) ==
          doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("class_log_density integrates to one over a wide grid") {
    Eigen::Matrix2d sigma;
    sigma << 1.0, 0.6, 0.6, 1.0;
    const ClassModel model(table_class1(), 0.5, sigma.inverse());

    // Ranges cover |z| beyond 3.8 in both dimensions (truncated mass ~1e-4).
    const int n1 = 1200, n2 = 1200;
    const double lo1 = -3.0, hi1 = 5.0, lo2 = -5.0, hi2 = 5.0;
    const double h1 = (hi1 - lo1) / n1, h2 = (hi2 - lo2) / n2;
    double mass = 0.0;
    Eigen::VectorXd x(2);
    for (int i = 0; i < n1; ++i) {
        x[0] = lo1 + (i + 0.5) * h1;
        for (int j = 0; j < n2; ++j) {
            x[1] = lo2 + (j + 0.5) * h2;
            mass += std::exp(class_log_density(model, x));
        }
    }
    mass *= h1 * h2;
    CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("class_log_density decreases with |z| when the Jacobian is constant") {
    // SN keeps the Jacobian term constant, isolating the quadratic part.
    const ClassModel model(params1(FamilyTag::SN, 0.0, 0.7, 1.3, 0.2), 1.0,
                           Eigen::MatrixXd::Constant(1, 1, 2.0));
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Eigen::VectorXd x1 = vec1(rng.normal() * 2.0);
        const Eigen::VectorXd x2 = vec1(rng.normal() * 2.0);
        const double z1 = std::abs(normalize_transform(model.params, x1)[0]);
        const double z2 = std::abs(normalize_transform(model.params, x2)[0]);
        if (std::abs(z1 - z2) < 1e-12) continue;
        const bool closer = z1 < z2;
        const bool denser = class_log_density(model, x1) > class_log_density(model, x2);
        CHECK(closer == denser);
    }
}

TEST_CASE("percentile interpolates order statistics") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(percentile(v, 50.0) == 3.0);
    CHECK(percentile(v, 25.0) == 2.0);
    const std::vector<double> two{10.0, 20.0};
    CHECK(percentile(two, 75.0) == 17.5);

    // input order is irrelevant
    const std::vector<double> shuffled{5.0, 3.0, 1.0, 4.0, 2.0};
    CHECK(percentile(shuffled, 50.0) == 3.0);

    CHECK_THROWS_AS(percentile(v, 0.0), RangeError);
    CHECK_THROWS_AS(percentile(v, 100.0), RangeError);
    CHECK_THROWS_AS(percentile(std::vector<double>{}, 50.0), RangeError);
}

TEST_CASE("fit_percentile is exact on exact analytic SU quantiles") {
    const double z = 0.524;
    const double g = -0.9, d = 0.9, l = 0.04, x0 = 0.15;
    const std::vector<double> percents{100.0 * oracle::phi(-3.0 * z), 100.0 * oracle::phi(-z),
                                       100.0 * oracle::phi(z), 100.0 * oracle::phi(3.0 * z)};
    const auto samples = oracle::exact_percentile_samples(
        500, [&](double p) { return oracle::su_quantile(p, g, d, l, x0); }, percents);

    const ScalarJohnson fitted = fit_percentile(samples, z);
    CHECK(fitted.family == FamilyTag::SU);
    CHECK(fitted.gamma == doctest::Approx(g).epsilon(1e-9));
    CHECK(fitted.delta == doctest::Approx(d).epsilon(1e-9));
    CHECK(fitted.lambda == doctest::Approx(l).epsilon(1e-9));
    CHECK(fitted.xi == doctest::Approx(x0).epsilon(1e-9));
}

TEST_CASE("fit_percentile recovers Table class-1 dim-1 parameters from draws") {
    const double g = -0.9, d = 0.9, l = 0.04, x0 = 0.15;
    Rng rng(2024);
    std::vector<double> samples(100000);
    for (double& s : samples) s = x0 + l * std::sinh((rng.normal() - g) / d);

    const ScalarJohnson fitted = fit_percentile(samples, 0.524);
    CHECK(oracle::rel_err(fitted.gamma, g) < 0.05);
    CHECK(oracle::rel_err(fitted.delta, d) < 0.05);
    CHECK(oracle::rel_err(fitted.lambda, l) < 0.05);
    CHECK(oracle::rel_err(fitted.xi, x0) < 0.05);
}

TEST_CASE("fit_percentile degenerate and mismatched inputs") {
    const std::vector<double> constant(25, 1.0);
    CHECK_THROWS_AS(fit_percentile(constant, 0.524), DegenerateSpacing);

    // Evenly spaced data has m*n/p^2 ~ 0.37 < 1: not SU-shaped.
    std::vector<double> uniform(101);
    for (size_t i = 0; i < uniform.size(); ++i) uniform[i] = static_cast<double>(i) / 100.0;
    CHECK_THROWS_AS(fit_percentile(uniform, 0.524, PercentileMode::Strict), FamilyMismatch);

    const ScalarJohnson fallback = fit_percentile(uniform, 0.524, PercentileMode::Lenient);
    CHECK(fallback.family == FamilyTag::SN);
    CHECK(fallback.gamma == 0.0);
    CHECK(fallback.delta == 1.0);
    const double mean = 0.5;
    double ss = 0.0;
    for (double u : uniform) ss += (u - mean) * (u - mean);
    const double sd = std::sqrt(ss / (uniform.size() - 1));
    CHECK(fallback.xi == doctest::Approx(mean).epsilon(1e-12));
    CHECK(fallback.lambda == doctest::Approx(sd).epsilon(1e-12));

    const std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_percentile(tiny, 0.524), RangeError);
    const std::vector<double> ok(25, 0.0);
    CHECK_THROWS_AS(fit_percentile(ok, 0.0), RangeError);
}

TEST_CASE("fit_percentile is affine-equivariant") {
    Rng rng(99);
    std::vector<double> samples(5000);
    for (double& s : samples) s = 0.15 + 0.04 * std::sinh((rng.normal() + 0.9) / 0.9);

    const double a = 2.5, b = -1.3;
    std::vector<double> mapped(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) mapped[i] = a * samples[i] + b;

    const ScalarJohnson base = fit_percentile(samples, 0.524);
    const ScalarJohnson moved = fit_percentile(mapped, 0.524);
    CHECK(moved.gamma == doctest::Approx(base.gamma).epsilon(1e-9));
    CHECK(moved.delta == doctest::Approx(base.delta).epsilon(1e-9));
    CHECK(moved.lambda == doctest::Approx(a * base.lambda).epsilon(1e-9));
    CHECK(moved.xi == doctest::Approx(a * base.xi + b).epsilon(1e-9));
}

TEST_CASE("percentile_quad spreads and su_from_quad errors") {
    std::vector<double> uniform(101);
    for (size_t i = 0; i < uniform.size(); ++i) uniform[i] = static_cast<double>(i) / 100.0;
    const PercentileQuad q = percentile_quad(uniform, 0.524);
    CHECK(q.x_m3z <= q.x_mz);
    CHECK(q.x_mz <= q.x_z);
    CHECK(q.x_z <= q.x_3z);
    CHECK(q.m == doctest::Approx(q.x_3z - q.x_z).epsilon(1e-15));
    CHECK(q.n == doctest::Approx(q.x_mz - q.x_m3z).epsilon(1e-15));
    CHECK(q.p == doctest::Approx(q.x_z - q.x_mz).epsilon(1e-15));
    CHECK(q.m * q.n / (q.p * q.p) < 1.0);
    CHECK_THROWS_AS(su_from_quad(q, 0.524), FamilyMismatch);

    PercentileQuad flat;
    flat.p = 0.0;
    CHECK_THROWS_AS(su_from_quad(flat, 0.524), DegenerateSpacing);
}

TEST_CASE("normal_cdf agrees with the oracle quantile") {
    for (double p : {0.001, 0.05, 0.3, 0.5, 0.75, 0.95, 0.999}) {
        CHECK(normal_cdf(oracle::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("JohnsonParams constructor validates") {
    CHECK_THROWS_AS(params1(FamilyTag::SU, 0.0, -1.0, 1.0, 0.0), RangeError);
    CHECK_THROWS_AS(params1(FamilyTag::SU, 0.0, 1.0, 0.0, 0.0), RangeError);
    Eigen::VectorXd two = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(JohnsonParams(FamilyTag::SU, vec1(0.0), two, two, two), RangeError);
}
