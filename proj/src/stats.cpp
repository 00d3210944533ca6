#include "pp84/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace pp84::stats {

namespace {

void add_joint(Joint2x2& a, const Joint2x2& b) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a[i][j] += b[i][j];
}

}  // namespace

void SessionStats::merge(const SessionStats& o) {
    total_runs += o.total_runs;
    for (int m = 0; m < 2; ++m) {
        runs_by_mode[m] += o.runs_by_mode[m];
        lost_forward_by_mode[m] += o.lost_forward_by_mode[m];
        lost_backward_by_mode[m] += o.lost_backward_by_mode[m];
    }
    for (int p = 0; p < 4; ++p) prep_counts[p] += o.prep_counts[p];
    control_matched += o.control_matched;
    control_mismatched += o.control_mismatched;
    applicable_checks += o.applicable_checks;
    detect_e1 += o.detect_e1;
    detect_e2 += o.detect_e2;
    pass_checks += o.pass_checks;
    encoding_runs += o.encoding_runs;
    encoding_completed += o.encoding_completed;
    add_joint(joint_ab, o.joint_ab);
    add_joint(joint_ae, o.joint_ae);
    add_joint(joint_ab_z, o.joint_ab_z);
    add_joint(joint_ab_x, o.joint_ab_x);
}

SessionStats merge(const SessionStats& a, const SessionStats& b) {
    SessionStats out = a;
    out.merge(b);
    return out;
}

Estimate estimate_detection(const SessionStats& s) {
    if (s.applicable_checks == 0)
        throw std::invalid_argument("no applicable control checks");
    const double n = static_cast<double>(s.applicable_checks);
    const double rate = static_cast<double>(s.detections()) / n;
    return Estimate{rate, std::sqrt(rate * (1.0 - rate) / n)};
}

double mutual_information_from_counts(const std::array<std::array<double, 2>, 2>& joint) {
    double total = 0.0;
    for (const auto& row : joint)
        for (double c : row) {
            if (c < 0.0) throw std::invalid_argument("negative cell count");
            total += c;
        }
    if (total <= 0.0) throw std::invalid_argument("empty joint table");
    const double pa[2] = {(joint[0][0] + joint[0][1]) / total, (joint[1][0] + joint[1][1]) / total};
    const double pb[2] = {(joint[0][0] + joint[1][0]) / total, (joint[0][1] + joint[1][1]) / total};
    double mi = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double p = joint[a][b] / total;
            if (p > 0.0) mi += p * std::log2(p / (pa[a] * pb[b]));
        }
    return mi;
}

double mutual_information_from_counts(const Joint2x2& joint) {
    std::array<std::array<double, 2>, 2> d{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) d[a][b] = static_cast<double>(joint[a][b]);
    return mutual_information_from_counts(d);
}

ComparisonReport compare(std::string quantity, double analytic, const Estimate& estimate,
                         double significance) {
    ComparisonReport r;
    r.quantity = std::move(quantity);
    r.analytic = analytic;
    r.empirical = estimate.value;
    r.std_error = estimate.std_error;
    r.significance = significance;
    if (estimate.std_error > 0.0) {
        r.z = (estimate.value - analytic) / estimate.std_error;
        r.pass = std::abs(r.z) <= normal_quantile(1.0 - significance / 2.0);
    } else {
        // Degenerate standard error: pass only on exact match.
        r.z = (estimate.value == analytic) ? 0.0 : INFINITY;
        r.pass = (estimate.value == analytic);
    }
    return r;
}

PerBasisInformation i_ab_per_basis(const SessionStats& s) {
    auto total = [](const Joint2x2& j) {
        return j[0][0] + j[0][1] + j[1][0] + j[1][1];
    };
    if (total(s.joint_ab_z) == 0 || total(s.joint_ab_x) == 0)
        throw std::invalid_argument("missing preparation-basis stratum");
    PerBasisInformation out;
    out.i_z = mutual_information_from_counts(s.joint_ab_z);
    out.i_x = mutual_information_from_counts(s.joint_ab_x);
    out.averaged = 0.5 * (out.i_z + out.i_x);
    return out;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile argument must be in (0,1)");
    auto cdf = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace pp84::stats
