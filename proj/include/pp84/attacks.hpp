#pragma once

// Eavesdropper strategies: projective intercept-resend on both passes, and
// the general incoherent two-ancilla attack with end-of-run ancilla
// measurement and operation inference.

#include <optional>
#include <random>
#include <utility>
#include <variant>

#include "pp84/qmath.hpp"

namespace pp84::attacks {

// Six incoherent-attack parameters. D = 1-F and D' = 1-F' are derived.
struct AttackParams {
    double f_fwd = 1.0;   // F
    double x = 0.0;       // overlap angle of the forward no-flip ancillae
    double y = 0.0;       // overlap angle of the forward flip ancillae
    double f_bwd = 1.0;   // F'
    double x_prime = 0.0;
    double y_prime = 0.0;

    void validate() const;  // throws on out-of-range values
};

struct NoAttack {};
struct ProjectiveInterceptResend {};
struct IncoherentTwoAncilla {
    AttackParams params;
};

using AttackStrategy = std::variant<NoAttack, ProjectiveInterceptResend, IncoherentTwoAncilla>;

// Eve's end-of-run record. For the two-ancilla attack eps_guess is the label
// of the qubit she believes left her forward interaction and eta_guess the
// label she believes entered the backward one; op_guess is 0 (identity) iff
// the two agree.
struct EveRecord {
    int eps_guess = 0;
    int eta_guess = 0;
    int op_guess = 0;  // 0 = I, 1 = iY
    std::string eps_label;
    std::string eta_label;
};

// Forward-path interaction: qubit (dim 2) -> qubit x fresh 4-dim ancilla.
// Ancilla embedding: eps~00 = e1, eps~11 = cos(x) e1 + sin(x) e2,
// eps~01 = e3, eps~10 = cos(y) e3 + sin(y) e4.
qmath::Isometry build_e1_isometry(double f, double x, double y);

// Backward-path interaction, same construction with primed parameters.
qmath::Isometry build_e2_isometry(double f_prime, double x_prime, double y_prime);

// Optimal two-outcome discrimination of v0 vs v1 (real nonnegative overlap
// cos(theta)), completed to a full orthonormal basis outside span{v0,v1}.
// Measuring a system prepared in v0 yields label "0" with probability
// (1 + sin(theta)) / 2.
qmath::MeasurementBasis helstrom_basis(const qmath::StateVector& v0,
                                       const qmath::StateVector& v1);

// Four-outcome ancilla basis realizing the subspace-first strategy: the two
// rank-2 subspaces {no-flip, flip} are orthogonal by construction, and within
// each the Helstrom pair discriminates the two nonorthogonal branch states.
// Labels are the branch indices "00", "11", "01", "10".
qmath::MeasurementBasis eve_ancilla_basis(double x, double y);

// Measures both ancillae of a post-E2 state (a genuine basis measurement on
// the joint state, so the back-action on the traveling qubit is kept) and
// infers Alice's operation.
std::pair<EveRecord, qmath::StateVector> eve_measure_and_infer(
    const qmath::StateVector& state, const AttackParams& params, int eps_subsystem,
    int eta_subsystem, std::mt19937_64& rng);

// One projective intercept-resend step: measure the bare traveling qubit in
// the chosen basis and resend the collapsed eigenstate.
std::pair<int, qmath::StateVector> projective_attack_step(const qmath::StateVector& s,
                                                          bool basis_is_x,
                                                          std::mt19937_64& rng);

}  // namespace pp84::attacks
