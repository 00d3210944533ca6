#include "pp84/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pp84::analytics {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_angle(double v, const char* what) {
    if (!(v >= 0.0 && v <= kHalfPi + 1e-12))
        throw std::invalid_argument(std::string(what) + " out of [0, pi/2]");
}

void check_prob(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(what) + " out of [0,1]");
}

double bisect(double lo, double hi, double tol, const auto& f) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::logic_error("root not bracketed");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double binary_entropy(double p) {
    check_prob(p, "p");
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double p_nd_forward(protocol::PrepState state, double f, double x, double y) {
    check_prob(f, "F");
    check_angle(x, "x");
    check_angle(y, "y");
    if (protocol::basis_of(state) == protocol::Basis::Z) return f;
    return 0.5 * (1.0 + f * std::cos(x) + (1.0 - f) * std::cos(y));
}

double p_d_average(double f, double x, double y, double f_prime, double x_prime,
                   double y_prime) {
    check_prob(f, "F");
    check_prob(f_prime, "F'");
    check_angle(x, "x");
    check_angle(y, "y");
    check_angle(x_prime, "x'");
    check_angle(y_prime, "y'");
    const double d = 1.0 - f, dp = 1.0 - f_prime;
    const double cx = std::cos(x), cy = std::cos(y);
    const double cxp = std::cos(x_prime), cyp = std::cos(y_prime);
    return (1.0 / 8.0) *
           (7.0 - 4.0 * f * f_prime - f * cx - d * cy - f_prime * cxp - dp * cyp -
            f * f_prime * cx * cxp - f * dp * cx * cyp - d * f_prime * cy * cxp -
            d * dp * cy * cyp);
}

double d_min(double x, double x_prime) {
    check_angle(x, "x");
    check_angle(x_prime, "x'");
    return 0.5 * (1.0 - (1.0 + std::cos(x)) * (1.0 + std::cos(x_prime)) / 4.0);
}

double i_ae(double x, double x_prime) {
    check_angle(x, "x");
    check_angle(x_prime, "x'");
    return 1.0 - binary_entropy(0.5 * (1.0 + std::sin(x) * std::sin(x_prime)));
}

double d_balanced(double x) {
    check_angle(x, "x");
    const double t = 1.0 + std::cos(x);
    return 0.5 - t * t / 8.0;
}

double x_of_d(double d) {
    if (!(d >= 0.0 && d <= 0.375))
        throw std::invalid_argument("d out of [0, 3/8]");
    return std::acos(std::clamp(2.0 * std::sqrt(1.0 - 2.0 * d) - 1.0, -1.0, 1.0));
}

double i_ae_of_d(double d) {
    if (!(d >= 0.0 && d <= 0.375))
        throw std::invalid_argument("d out of [0, 3/8]");
    const double r = 2.0 * std::sqrt(1.0 - 2.0 * d) - 1.0;
    return 1.0 - binary_entropy(0.5 * (2.0 - r * r));
}

double i_ab(double x) {
    check_angle(x, "x");
    const double c = std::cos(x);
    return 1.0 - 0.5 * binary_entropy(0.5 * (1.0 + c * c));
}

double i_ae_bound(double x) {
    check_angle(x, "x");
    return 1.0 - binary_entropy(0.5 * (1.0 + std::sin(x)));
}

ThresholdResult security_threshold(EveCurve curve) {
    auto gap = [curve](double x) {
        const double eve = (curve == EveCurve::Incoherent) ? i_ae(x, x) : i_ae_bound(x);
        return i_ab(x) - eve;
    };
    ThresholdResult r;
    r.x_root = bisect(1e-9, kHalfPi - 1e-9, 1e-10, gap);
    r.d_star = d_balanced(r.x_root);
    return r;
}

double qdc_eavesdrop_success(double c, double d, std::uint64_t n) {
    check_prob(c, "c");
    check_prob(d, "d");
    const double per_bit = (1.0 - c) / (1.0 - c * (1.0 - d));
    return std::pow(per_bit, static_cast<double>(n));
}

EfficiencyResult efficiency(const EfficiencyInput& input) {
    if (input.secret_bits < 0.0 || input.qubits < 0.0 || input.classical_bits < 0.0)
        throw std::invalid_argument("efficiency inputs must be nonnegative");
    if (input.qubits + input.classical_bits <= 0.0)
        throw std::invalid_argument("q_t + b_t must be positive");
    if (!(input.transmission > 0.0 && input.transmission <= 1.0))
        throw std::invalid_argument("P out of (0,1]");
    EfficiencyResult r;
    r.e = input.secret_bits / (input.qubits + input.classical_bits);
    r.e_practical = r.e * input.transmission * input.transmission;
    return r;
}

double efficiency_crossover() {
    // E_pp84 * P^2 = E_bb84 * P with E_pp84 = 1, E_bb84 = 1/4.
    return 0.25;
}

LemmaReport verify_lemma(std::size_t grid_size, const std::vector<double>& d_targets) {
    if (grid_size < 50) throw std::invalid_argument("grid_size must be at least 50");
    LemmaReport report;
    report.resolution = kHalfPi / static_cast<double>(grid_size);
    report.all_balanced = true;
    for (double d : d_targets) {
        if (!(d >= 0.0 && d <= 0.375)) throw std::invalid_argument("target d out of [0, 3/8]");
        LemmaPoint pt;
        pt.d_target = d;
        pt.best_i_ae = -1.0;
        const double product = 4.0 * (1.0 - 2.0 * d);  // (1+cos x)(1+cos x')
        for (std::size_t i = 0; i <= grid_size; ++i) {
            const double x = report.resolution * static_cast<double>(i);
            const double cxp = product / (1.0 + std::cos(x)) - 1.0;
            if (cxp < 0.0 || cxp > 1.0) continue;  // off the constraint curve
            const double xp = std::acos(cxp);
            const double info = i_ae(x, xp);
            if (info > pt.best_i_ae) {
                pt.best_i_ae = info;
                pt.best_x = x;
                pt.best_x_prime = xp;
            }
        }
        pt.balanced = std::abs(pt.best_x - pt.best_x_prime) <= report.resolution + 1e-12;
        report.all_balanced = report.all_balanced && pt.balanced;
        report.points.push_back(pt);
    }
    return report;
}

LemmaReport verify_lemma(std::size_t grid_size) {
    return verify_lemma(grid_size, {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35});
}

}  // namespace pp84::analytics
