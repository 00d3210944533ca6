// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "pp84/analytics.hpp"
#include "pp84/protocol.hpp"
#include "pp84/rng.hpp"
#include "pp84/stats.hpp"

using namespace pp84;
namespace an = pp84::analytics;
using protocol::PrepState;
using protocol::RunConfig;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    if (!pass) g_failures++;
}

bool within_4se(double empirical, double analytic, std::uint64_t n) {
    const double se = std::sqrt(analytic * (1.0 - analytic) / double(n));
    return std::abs(empirical - analytic) <= 4.0 * se;
}

stats::SessionStats run_block(const RunConfig& cfg, std::uint64_t runs) {
    protocol::SessionTask task;
    task.run_count = runs;
    task.collect_records = false;
    return protocol::run_session(cfg, task).stats;
}

// 1. Projective-attack detection rate 3/8 over >= 1e5 applicable checks.
void criterion_1() {
    RunConfig cfg;
    cfg.control_prob = 1.0;
    cfg.attack = attacks::ProjectiveInterceptResend{};
    cfg.seed = 101;
    auto s = run_block(cfg, 210000);
    auto est = stats::estimate_detection(s);
    const bool pass =
        s.applicable_checks >= 100000 && within_4se(est.value, 0.375, s.applicable_checks);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "projective detection rate %.5f vs 0.375 (%llu checks)", est.value,
                  (unsigned long long)s.applicable_checks);
    report(1, pass, buf);
}

// 2. BB84 intercept-resend sifted error rate 1/4 over >= 1e5 sifted bits.
void criterion_2() {
    auto s = protocol::run_bb84_baseline(220000, attacks::ProjectiveInterceptResend{}, 102);
    const bool pass = s.sifted >= 100000 && within_4se(s.error_rate(), 0.25, s.sifted);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "bb84 sifted error rate %.5f vs 0.25 (%llu sifted)",
                  s.error_rate(), (unsigned long long)s.sifted);
    report(2, pass, buf);
}

const std::vector<double> kXGrid = {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kHalfPi};

// 3. Balanced incoherent detection curve d(x) = 1/2 - (1+cos x)^2 / 8.
void criterion_3() {
    bool pass = true;
    std::string detail = "detection curve:";
    for (double x : kXGrid) {
        RunConfig cfg;
        cfg.control_prob = 1.0;
        cfg.attack = attacks::IncoherentTwoAncilla{{1.0, x, 0.0, 1.0, x, 0.0}};
        cfg.seed = 103 + (std::uint64_t)(x * 1000);
        auto s = run_block(cfg, 205000);
        const double want = an::d_balanced(x);
        const double got = stats::estimate_detection(s).value;
        bool ok = s.applicable_checks >= 100000;
        if (want == 0.0)
            ok = ok && s.detections() == 0;
        else
            ok = ok && within_4se(got, want, s.applicable_checks);
        pass = pass && ok;
        char buf[48];
        std::snprintf(buf, sizeof(buf), " %.4f/%.4f", got, want);
        detail += buf;
    }
    report(3, pass, detail);
}

// 4. Eve's correct-guess rate (1+sin^2 x)/2 and plug-in MI vs i_ae(x,x).
void criterion_4() {
    bool pass = true;
    std::string detail = "eve info:";
    for (double x : kXGrid) {
        RunConfig cfg;
        cfg.control_prob = 0.0;
        cfg.attack = attacks::IncoherentTwoAncilla{{1.0, x, 0.0, 1.0, x, 0.0}};
        cfg.seed = 104 + (std::uint64_t)(x * 1000);
        auto s = run_block(cfg, 100000);
        const std::uint64_t n = s.encoding_completed;
        const double correct = double(s.joint_ae[0][0] + s.joint_ae[1][1]) / double(n);
        const double want_rate = 0.5 * (1.0 + std::sin(x) * std::sin(x));
        const double mi = stats::mutual_information_from_counts(s.joint_ae);
        const double want_mi = an::i_ae(x, x);
        bool ok = n >= 100000;
        if (want_rate == 1.0)
            ok = ok && correct == 1.0;
        else
            ok = ok && within_4se(correct, want_rate, n);
        ok = ok && std::abs(mi - want_mi) <= 0.01;
        pass = pass && ok;
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %.4f/%.4f mi %.4f/%.4f", correct, want_rate, mi,
                      want_mi);
        detail += buf;
    }
    report(4, pass, detail);
}

// 5. Bob's per-basis strata: Z MI exactly 1, X rate (1+cos^2 x)/2, averaged
//    MI vs i_ab(x). Preparations and bits are cycled for exactly balanced
//    tables so the Z stratum is deterministic.
void criterion_5() {
    bool pass = true;
    std::string detail = "bob info:";
    for (double x : {kPi / 8, kPi / 4, 3 * kPi / 8}) {
        RunConfig cfg;
        cfg.control_prob = 0.0;
        cfg.attack = attacks::IncoherentTwoAncilla{{1.0, x, 0.0, 1.0, x, 0.0}};
        cfg.seed = 105 + (std::uint64_t)(x * 1000);
        auto prepared = protocol::PreparedAttack::from(cfg.attack);
        stats::SessionStats s;
        const int n = 80000;  // divisible by 8: balanced over prep x bit
        static const PrepState preps[4] = {PrepState::Zero, PrepState::One, PrepState::Plus,
                                           PrepState::Minus};
        for (int i = 0; i < n; ++i) {
            std::mt19937_64 rng = run_rng(cfg.seed, i);
            auto rec = protocol::run_single(cfg, prepared, (i / 4) % 2, rng, preps[i % 4]);
            protocol::accumulate(s, rec);
        }
        auto info = stats::i_ab_per_basis(s);
        const std::uint64_t nx = s.joint_ab_x[0][0] + s.joint_ab_x[0][1] +
                                 s.joint_ab_x[1][0] + s.joint_ab_x[1][1];
        const double x_rate =
            double(s.joint_ab_x[0][0] + s.joint_ab_x[1][1]) / double(nx);
        const double want_rate = 0.5 * (1.0 + std::cos(x) * std::cos(x));
        bool ok = info.i_z == 1.0;
        ok = ok && within_4se(x_rate, want_rate, nx);
        ok = ok && std::abs(info.averaged - an::i_ab(x)) <= 0.01;
        pass = pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " z %.4f x %.4f/%.4f mi %.4f/%.4f", info.i_z, x_rate,
                      want_rate, info.averaged, an::i_ab(x));
        detail += buf;
    }
    report(5, pass, detail);
}

// 6. Security thresholds from bisection.
void criterion_6() {
    auto inc = an::security_threshold(an::EveCurve::Incoherent);
    auto bnd = an::security_threshold(an::EveCurve::Bound);
    const bool pass = inc.d_star >= 0.225 && inc.d_star <= 0.235 && bnd.d_star >= 0.180 &&
                      bnd.d_star <= 0.190 && bnd.d_star < inc.d_star;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "thresholds d*=%.6f (incoherent), %.6f (bound)",
                  inc.d_star, bnd.d_star);
    report(6, pass, buf);
}

// 7. QDC undetected-eavesdropper probability: analytic values and a Monte
//    Carlo frequency over seeded sessions. The closed form charges every
//    control run with a full-strength check; in the simulator only matched-
//    basis control runs check, so control odds of 2:1 (c = 2/3) reproduce
//    the closed form's 1:1 odds at half detection strength.
void criterion_7() {
    const double want8 = an::qdc_eavesdrop_success(0.5, 0.375, 8);
    const double want16 = an::qdc_eavesdrop_success(0.5, 0.375, 16);
    bool pass = std::abs(want8 - 0.0779) <= 0.0005 && std::abs(want16 - 0.0061) <= 0.0005;

    const int sessions = 100000;
    int undetected = 0;
    RunConfig cfg;
    cfg.control_prob = 2.0 / 3.0;
    cfg.attack = attacks::ProjectiveInterceptResend{};
    cfg.mode = protocol::Mode::QDC;
    protocol::SessionTask task;
    task.payload.assign(8, 1);
    for (int i = 0; i < 8; i += 2) task.payload[i] = 0;
    task.collect_records = false;
    for (int s = 0; s < sessions; ++s) {
        cfg.seed = 700000 + s;
        auto res = protocol::run_session(cfg, task);
        if (!res.aborted && res.bits_delivered == 8) undetected++;
    }
    const double freq = double(undetected) / sessions;
    pass = pass && within_4se(freq, want8, sessions);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "qdc success analytic %.6f / %.6f, monte carlo %.6f vs %.6f", want8, want16,
                  freq, want8);
    report(7, pass, buf);
}

// 8. Efficiency endpoints and crossover, exact.
void criterion_8() {
    const double pp84 = an::efficiency({1.0, 1.0, 0.0, 1.0}).e;
    const double bb84 = an::efficiency({0.5, 1.0, 1.0, 1.0}).e;
    const double cross = an::efficiency_crossover();
    const bool pass = pp84 == 1.0 && bb84 == 0.25 && cross == 0.25;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "efficiency E=%.2f vs 1, bb84 %.2f vs 1/4, crossover P=%.2f",
                  pp84, bb84, cross);
    report(8, pass, buf);
}

// 9. Formula consistency properties.
void criterion_9() {
    bool pass = true;
    // (a) full-fidelity average equals the explicit minimum on a grid
    for (int i = 0; i <= 30 && pass; ++i)
        for (int j = 0; j <= 30 && pass; ++j) {
            const double x = kHalfPi * i / 30.0, xp = kHalfPi * j / 30.0;
            if (std::abs(an::p_d_average(1.0, x, 0.4, 1.0, xp, 1.1) - an::d_min(x, xp)) > 1e-12)
                pass = false;
        }
    // (b) information curve composition
    for (int i = 0; i <= 50 && pass; ++i) {
        const double x = kHalfPi * i / 50.0;
        if (std::abs(an::i_ae_of_d(an::d_balanced(x)) - an::i_ae(x, x)) > 1e-9) pass = false;
    }
    // (c) F = F' = 1 minimizes detection over the whole parameter box
    for (int a = 0; a <= 8 && pass; ++a)
        for (int b = 0; b <= 8 && pass; ++b)
            for (int c = 0; c <= 8 && pass; ++c)
                for (int d = 0; d <= 8 && pass; ++d)
                    for (int e = 0; e <= 8 && pass; ++e)
                        for (int g = 0; g <= 8 && pass; ++g) {
                            const double f1 = a / 8.0, x = kHalfPi * b / 8.0,
                                         y = kHalfPi * c / 8.0;
                            const double f2 = d / 8.0, xp = kHalfPi * e / 8.0,
                                         yp = kHalfPi * g / 8.0;
                            if (an::p_d_average(f1, x, y, f2, xp, yp) <
                                an::d_min(x, xp) - 1e-12)
                                pass = false;
                        }
    report(9, pass, "formula consistency: d_min identity, i_ae composition, F=1 minimality");
}

// 10. Lemma: the information maximum on each fixed-detection curve is balanced.
void criterion_10() {
    auto rep = an::verify_lemma(100, {0.05, 0.1, 0.2, 0.3});
    bool pass = rep.all_balanced;
    for (const auto& p : rep.points)
        pass = pass && std::abs(p.best_x - p.best_x_prime) <= rep.resolution + 1e-12;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "lemma argmax balanced at resolution %.6f for 4 targets",
                  rep.resolution);
    report(10, pass, buf);
}

// 11. Honest channel: no detections, no decode errors, exactly.
void criterion_11() {
    RunConfig cfg;
    cfg.seed = 111;
    auto s = run_block(cfg, 1000000);
    const bool pass = s.detections() == 0 && s.joint_ab[0][1] == 0 && s.joint_ab[1][0] == 0 &&
                      s.total_runs == 1000000;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "honest 1e6 runs: %llu detections, %llu decode errors",
                  (unsigned long long)s.detections(),
                  (unsigned long long)(s.joint_ab[0][1] + s.joint_ab[1][0]));
    report(11, pass, buf);
}

// 12. Loss anomaly calibration: size under the null, power under
//     mode-dependent loss.
void criterion_12() {
    int rejections = 0;
    const int null_sessions = 1000;
    for (int i = 0; i < null_sessions; ++i) {
        RunConfig cfg;
        cfg.control_prob = 0.5;
        cfg.transmission_prob = 0.9;
        cfg.seed = 120000 + i;
        auto s = run_block(cfg, 20000);
        if (protocol::loss_anomaly_test(s, 0.05).verdict == protocol::AnomalyVerdict::Anomaly)
            rejections++;
    }
    const double null_rate = double(rejections) / null_sessions;

    int flagged = 0;
    const int alt_sessions = 200;
    for (int i = 0; i < alt_sessions; ++i) {
        RunConfig cfg;
        cfg.control_prob = 0.5;
        cfg.transmission_control = 0.8;
        cfg.transmission_encoding = 0.9;
        cfg.seed = 125000 + i;
        auto s = run_block(cfg, 20000);
        if (protocol::loss_anomaly_test(s, 0.05).verdict == protocol::AnomalyVerdict::Anomaly)
            flagged++;
    }
    const double power = double(flagged) / alt_sessions;
    const bool pass = null_rate <= 0.05 && power >= 0.99;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "loss anomaly: null rejection %.3f, power %.3f", null_rate,
                  power);
    report(12, pass, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
