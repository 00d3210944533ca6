#pragma once

// Monte Carlo counters and empirical-vs-analytic comparison reports.

#include <array>
#include <cstdint>
#include <string>

namespace pp84::stats {

using Joint2x2 = std::array<std::array<std::uint64_t, 2>, 2>;

// Aggregated per-session counts. Merging is associative and commutative, so
// independent run blocks can be reduced in any order.
struct SessionStats {
    std::uint64_t total_runs = 0;
    std::array<std::uint64_t, 2> runs_by_mode{};           // [control, encoding]
    std::array<std::uint64_t, 2> lost_forward_by_mode{};
    std::array<std::uint64_t, 2> lost_backward_by_mode{};
    std::array<std::uint64_t, 4> prep_counts{};            // |0>, |1>, |+>, |->
    std::uint64_t control_matched = 0;    // completed control runs, basis matched
    std::uint64_t control_mismatched = 0;
    std::uint64_t applicable_checks = 0;
    std::uint64_t detect_e1 = 0;
    std::uint64_t detect_e2 = 0;
    std::uint64_t pass_checks = 0;
    std::uint64_t encoding_runs = 0;       // sampled encoding mode
    std::uint64_t encoding_completed = 0;  // encoding runs with a decoded bit
    Joint2x2 joint_ab{};    // alice bit x bob bit, completed encoding runs
    Joint2x2 joint_ae{};    // alice bit x eve op guess, completed encoding runs
    Joint2x2 joint_ab_z{};  // joint_ab restricted to Z-basis preparations
    Joint2x2 joint_ab_x{};  // joint_ab restricted to X-basis preparations

    std::uint64_t detections() const { return detect_e1 + detect_e2; }
    std::uint64_t lost_by_mode(int mode) const {
        return lost_forward_by_mode[mode] + lost_backward_by_mode[mode];
    }

    void merge(const SessionStats& other);
};

SessionStats merge(const SessionStats& a, const SessionStats& b);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Detection rate over applicable control checks with its binomial standard
// error. Throws std::invalid_argument when no check is applicable.
Estimate estimate_detection(const SessionStats& s);

// Plug-in (maximum likelihood) mutual information in bits from a 2x2 table of
// counts or proportions; zero cells contribute 0. Throws on an empty table.
double mutual_information_from_counts(const std::array<std::array<double, 2>, 2>& joint);
double mutual_information_from_counts(const Joint2x2& joint);

struct ComparisonReport {
    std::string quantity;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    double significance = 0.0;
    bool pass = false;
};

ComparisonReport compare(std::string quantity, double analytic, const Estimate& estimate,
                         double significance);

struct PerBasisInformation {
    double i_z = 0.0;
    double i_x = 0.0;
    double averaged = 0.0;
};

// Mutual information computed separately on Z-prepared and X-prepared
// encoding runs. Throws when either stratum is empty.
PerBasisInformation i_ab_per_basis(const SessionStats& s);

// Inverse standard normal CDF.
double normal_quantile(double p);

}  // namespace pp84::stats
