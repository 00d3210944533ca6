#pragma once

// Closed-form security and efficiency results, independent of the simulator.

#include <cstdint>
#include <vector>

#include "pp84/protocol.hpp"

namespace pp84::analytics {

// Shannon binary entropy in bits, with 0 log 0 = 0. Throws on p outside [0,1].
double binary_entropy(double p);

// Probability that Eve is not detected on the forward path for one
// preparation: F for Z states, (1/2)[1 + F cos x + (1-F) cos y] for X states.
double p_nd_forward(protocol::PrepState state, double f, double x, double y);

// Detection probability of the double test averaged over the four
// preparations, as a function of all six attack parameters.
double p_d_average(double f, double x, double y, double f_prime, double x_prime,
                   double y_prime);

// Minimum of the averaged detection probability, reached at F = F' = 1.
double d_min(double x, double x_prime);

// Eve's information for the optimal incoherent strategy at F = F' = 1.
double i_ae(double x, double x_prime);

// Balanced-attack detection probability d(x) and its inverse x(d).
double d_balanced(double x);
double x_of_d(double d);  // throws for d outside [0, 3/8]

// Eve's information as a function of the balanced detection probability.
double i_ae_of_d(double d);

// Bob's information for a balanced attack: average of the per-basis
// informations.
double i_ab(double x);

// Information bound covering coherent attacks as well.
double i_ae_bound(double x);

enum class EveCurve { Incoherent, Bound };

struct ThresholdResult {
    double d_star = 0.0;  // detection probability at the information crossing
    double x_root = 0.0;  // balanced angle of the crossing
};

// Bisection root of i_ab(x) - i_ae(x,x) (or - i_ae_bound(x)) on (0, pi/2),
// to 1e-10 in x, mapped through d_balanced.
ThresholdResult security_threshold(EveCurve curve);

// BB84 reference threshold for individual attacks on a lossless channel.
inline constexpr double kBb84ThresholdReference = 0.15;

// Probability that an eavesdropper obtains n bits of full information from a
// QDC session without being detected: [(1-c) / (1 - c(1-d))]^n.
double qdc_eavesdrop_success(double c, double d, std::uint64_t n);

struct EfficiencyInput {
    double secret_bits = 0.0;     // b_s
    double qubits = 0.0;          // q_t
    double classical_bits = 0.0;  // b_t
    double transmission = 1.0;    // P, per one-way pass
};

struct EfficiencyResult {
    double e = 0.0;            // b_s / (q_t + b_t)
    double e_practical = 0.0;  // E * P^2 (two-way channel)
};

EfficiencyResult efficiency(const EfficiencyInput& input);

// Transmission probability at which PP84's practical efficiency (E=1, P^2)
// equals BB84's (E=1/4, one-way): P = 1/4.
double efficiency_crossover();

struct LemmaPoint {
    double d_target = 0.0;
    double best_x = 0.0;
    double best_x_prime = 0.0;
    double best_i_ae = 0.0;
    bool balanced = false;  // |best_x - best_x_prime| <= grid resolution
};

struct LemmaReport {
    double resolution = 0.0;
    std::vector<LemmaPoint> points;
    bool all_balanced = false;
};

// Exhaustive grid search over the constraint curve d_min(x, x') = d for the
// maximizer of i_ae(x, x'); the claim is that the maximum sits at x = x'.
LemmaReport verify_lemma(std::size_t grid_size, const std::vector<double>& d_targets);
LemmaReport verify_lemma(std::size_t grid_size);

}  // namespace pp84::analytics
