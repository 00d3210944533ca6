#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pp84/analytics.hpp"

using namespace pp84;
namespace an = pp84::analytics;
using protocol::PrepState;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

TEST_CASE("binary entropy values and domain") {
    CHECK(an::binary_entropy(0.0) == 0.0);
    CHECK(an::binary_entropy(1.0) == 0.0);
    CHECK(an::binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(an::binary_entropy(0.75) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK_THROWS_AS(an::binary_entropy(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(an::binary_entropy(1.01), std::invalid_argument);
}

TEST_CASE("forward non-detection pieces") {
    CHECK(an::p_nd_forward(PrepState::Zero, 0.8, 1.0, 1.2) == doctest::Approx(0.8));
    CHECK(an::p_nd_forward(PrepState::One, 0.8, 1.0, 1.2) == doctest::Approx(0.8));
    const double f = 0.8, x = 1.0, y = 1.2;
    const double want = 0.5 * (1.0 + f * std::cos(x) + (1.0 - f) * std::cos(y));
    CHECK(an::p_nd_forward(PrepState::Plus, f, x, y) == doctest::Approx(want).epsilon(1e-12));
    CHECK(an::p_nd_forward(PrepState::Minus, f, x, y) == doctest::Approx(want).epsilon(1e-12));
    // trivial endpoints: perfect fidelity with no rotation means no detection
    CHECK(an::p_nd_forward(PrepState::Plus, 1.0, 0.0, 0.7) == doctest::Approx(1.0));
}

TEST_CASE("averaged detection probability endpoints") {
    CHECK(an::p_d_average(1.0, 0.0, 0.0, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(an::p_d_average(1.0, kHalfPi, 0.0, 1.0, kHalfPi, 0.0) ==
          doctest::Approx(0.375).epsilon(1e-12));
    CHECK(an::p_d_average(1.0, kHalfPi, 1.3, 1.0, kHalfPi, 0.4) ==
          doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("averaged detection equals one minus the survival product at F=F'=1") {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double x = kHalfPi * i / 20.0;
            const double xp = kHalfPi * j / 20.0;
            double survival = 0.0;
            for (auto prep : {PrepState::Zero, PrepState::One, PrepState::Plus,
                              PrepState::Minus})
                survival += an::p_nd_forward(prep, 1.0, x, 0.0) *
                            an::p_nd_forward(prep, 1.0, xp, 0.0) / 4.0;
            CHECK(an::p_d_average(1.0, x, 0.3, 1.0, xp, 0.9) ==
                  doctest::Approx(1.0 - survival).epsilon(1e-12));
            CHECK(an::d_min(x, xp) == doctest::Approx(1.0 - survival).epsilon(1e-12));
        }
}

TEST_CASE("detection is minimized at full fidelity") {
    // scan F, F' below 1 with y-angles on a coarse grid; none beats F=F'=1
    const double x = 0.9, xp = 0.6;
    const double floor = an::d_min(x, xp);
    for (int fi = 0; fi <= 8; ++fi)
        for (int yi = 0; yi <= 8; ++yi) {
            const double f = fi / 8.0;
            const double y = kHalfPi * yi / 8.0;
            CHECK(an::p_d_average(f, x, y, 1.0, xp, 0.0) >= floor - 1e-12);
            CHECK(an::p_d_average(1.0, x, 0.0, f, xp, y) >= floor - 1e-12);
        }
}

TEST_CASE("d_min pinned values") {
    CHECK(an::d_min(kHalfPi, kHalfPi) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(an::d_min(0.0, 0.0) == doctest::Approx(0.0));
    CHECK(an::d_min(kHalfPi, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("eve information values") {
    CHECK(an::i_ae(kHalfPi, kHalfPi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(an::i_ae(0.0, 0.0) == doctest::Approx(0.0));
    CHECK(an::i_ae(kPi / 4, kPi / 4) == doctest::Approx(0.188722).epsilon(1e-5));
}

TEST_CASE("balanced detection curve and its inverse") {
    CHECK(an::d_balanced(0.0) == doctest::Approx(0.0));
    CHECK(an::d_balanced(kHalfPi) == doctest::Approx(0.375).epsilon(1e-12));
    for (int i = 0; i <= 40; ++i) {
        const double x = kHalfPi * i / 40.0;
        CHECK(an::x_of_d(an::d_balanced(x)) == doctest::Approx(x).epsilon(1e-10));
    }
    for (int i = 0; i <= 40; ++i) {
        const double d = 0.375 * i / 40.0;
        CHECK(an::d_balanced(an::x_of_d(d)) == doctest::Approx(d).epsilon(1e-10));
    }
    CHECK_THROWS_AS(an::x_of_d(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(an::x_of_d(0.38), std::invalid_argument);
}

TEST_CASE("information as a function of detection") {
    CHECK(an::i_ae_of_d(0.375) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(an::i_ae_of_d(0.0) == doctest::Approx(0.0));
    for (int i = 1; i < 50; ++i) {
        const double x = kHalfPi * i / 50.0;
        CHECK(an::i_ae_of_d(an::d_balanced(x)) ==
              doctest::Approx(an::i_ae(x, x)).epsilon(1e-9));
    }
}

TEST_CASE("bob information for a balanced attack") {
    CHECK(an::i_ab(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Z stratum stays perfect; X stratum error (1 - cos^2 x)/2
    CHECK(an::i_ab(kPi / 4) == doctest::Approx(0.594361).epsilon(1e-5));
    const double x = 0.8;
    const double px = 0.5 * (1 + std::cos(x) * std::cos(x));
    CHECK(an::i_ab(x) ==
          doctest::Approx(0.5 * (1.0 + 1.0 - an::binary_entropy(px))).epsilon(1e-12));
}

TEST_CASE("coherent bound dominates the incoherent curve") {
    for (int i = 0; i <= 50; ++i) {
        const double x = kHalfPi * i / 50.0;
        CHECK(an::i_ae_bound(x) >= an::i_ae(x, x) - 1e-12);
    }
    CHECK(an::i_ae_bound(kHalfPi) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("security thresholds") {
    auto inc = an::security_threshold(an::EveCurve::Incoherent);
    auto bnd = an::security_threshold(an::EveCurve::Bound);
    CHECK(inc.d_star == doctest::Approx(0.2343).epsilon(5e-3));
    CHECK(bnd.d_star == doctest::Approx(0.1845).epsilon(5e-3));
    CHECK(inc.d_star > 0.225);
    CHECK(inc.d_star < 0.235);
    CHECK(bnd.d_star > 0.180);
    CHECK(bnd.d_star < 0.190);
    CHECK(bnd.d_star < inc.d_star);
    CHECK(bnd.d_star > an::kBb84ThresholdReference);
    // the crossing really crosses
    auto at = [](double x) { return an::i_ab(x) - an::i_ae(x, x); };
    CHECK(at(inc.x_root - 1e-6) * at(inc.x_root + 1e-6) <= 0.0);
}

TEST_CASE("qdc eavesdropping success probability") {
    CHECK(an::qdc_eavesdrop_success(0.5, 0.375, 0) == doctest::Approx(1.0));
    CHECK(an::qdc_eavesdrop_success(0.5, 0.375, 8) == doctest::Approx(0.078267).epsilon(0.007));
    CHECK(an::qdc_eavesdrop_success(0.5, 0.375, 16) ==
          doctest::Approx(0.0061257).epsilon(0.01));
    // monotone decreasing in n, c, and d
    CHECK(an::qdc_eavesdrop_success(0.5, 0.375, 9) < an::qdc_eavesdrop_success(0.5, 0.375, 8));
    CHECK(an::qdc_eavesdrop_success(0.6, 0.375, 8) < an::qdc_eavesdrop_success(0.5, 0.375, 8));
    CHECK(an::qdc_eavesdrop_success(0.5, 0.5, 8) < an::qdc_eavesdrop_success(0.5, 0.375, 8));
    CHECK_THROWS_AS(an::qdc_eavesdrop_success(-0.1, 0.375, 8), std::invalid_argument);
    CHECK_THROWS_AS(an::qdc_eavesdrop_success(0.5, 1.1, 8), std::invalid_argument);
}

TEST_CASE("channel efficiency and crossover") {
    an::EfficiencyInput pp84{1.0, 1.0, 0.0, 1.0};
    auto r = an::efficiency(pp84);
    CHECK(r.e == doctest::Approx(1.0));
    CHECK(r.e_practical == doctest::Approx(1.0));

    an::EfficiencyInput bb84{0.5, 1.0, 1.0, 1.0};
    auto b = an::efficiency(bb84);
    CHECK(b.e == doctest::Approx(0.25));

    pp84.transmission = 0.5;
    CHECK(an::efficiency(pp84).e_practical == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(an::efficiency_crossover() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("unbalanced attacks never beat the balanced one at fixed detection") {
    auto report = an::verify_lemma(100, {0.05, 0.10, 0.20, 0.30});
    CHECK(report.resolution == doctest::Approx(kHalfPi / 100.0));
    CHECK(report.all_balanced);
    for (const auto& p : report.points) {
        CHECK(p.balanced);
        CHECK(std::abs(p.best_x - p.best_x_prime) <= report.resolution + 1e-12);
        // best value matches the balanced closed form at this detection level
        const double xb = an::x_of_d(p.d_target);
        CHECK(p.best_i_ae <= an::i_ae(xb, xb) + 1e-6);
        CHECK(p.best_i_ae >= an::i_ae(xb, xb) - 0.02);
    }
    CHECK_THROWS_AS(an::verify_lemma(10), std::invalid_argument);
}
