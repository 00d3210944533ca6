#pragma once

// The PP84 run engine: Bob's preparation, the E1 attack point, Alice's
// control/encoding decision, the E2 attack point, Bob's decoding, the double
// detection test, loss accounting, session orchestration for QDC and QKD,
// and a minimal BB84 baseline.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pp84/attacks.hpp"
#include "pp84/stats.hpp"

namespace pp84::protocol {

enum class Basis { Z, X };

enum class PrepState { Zero, One, Plus, Minus };

Basis basis_of(PrepState s);
// Index of the state within its basis: Zero/Plus -> 0, One/Minus -> 1.
int label_of(PrepState s);
std::string to_string(PrepState s);
std::string to_string(Basis b);

enum class EncodingOp { I = 0, IY = 1 };  // I encodes bit 0, iY = ZX encodes bit 1

enum class Mode { QDC, QKD };

enum class EveTiming { Deferred, Interleaved };

struct RunConfig {
    double control_prob = 0.5;                 // c
    attacks::AttackStrategy attack = attacks::NoAttack{};
    double transmission_prob = 1.0;            // P, per one-way pass
    Mode mode = Mode::QKD;
    std::uint64_t seed = 0;
    // Test hook for mode-dependent channel loss (loss-anomaly studies).
    std::optional<double> transmission_control;
    std::optional<double> transmission_encoding;
    EveTiming eve_timing = EveTiming::Deferred;

    void validate() const;
};

enum class RunMode { Control, Encoding };

enum class DetectionOutcome { NotApplicable, Pass, DetectE1, DetectE2 };

std::string to_string(DetectionOutcome d);

struct RunRecord {
    PrepState prep = PrepState::Zero;
    RunMode mode_taken = RunMode::Encoding;
    std::optional<Basis> alice_basis;    // control only
    std::optional<int> alice_outcome;    // control only; label index in alice_basis
    std::optional<EncodingOp> alice_op;  // encoding only
    std::optional<int> bob_outcome;      // label index in the preparation basis
    DetectionOutcome detection = DetectionOutcome::NotApplicable;
    bool lost_forward = false;
    bool lost_backward = false;
    std::optional<attacks::EveRecord> eve_record;

    bool lost() const { return lost_forward || lost_backward; }
    // Bob's decoded bit (encoding runs that completed).
    std::optional<int> decoded_bit() const;
    std::optional<int> alice_bit() const;
};

// Attack state prebuilt once per config so sessions do not rebuild isometries
// and bases on every run.
struct PreparedAttack {
    enum class Kind { None, Projective, Incoherent } kind = Kind::None;
    attacks::AttackParams params;
    qmath::Isometry e1, e2;

    static PreparedAttack from(const attacks::AttackStrategy& strategy);
};

RunRecord run_single(const RunConfig& config, const PreparedAttack& attack,
                     std::optional<int> forced_bit, std::mt19937_64& rng,
                     std::optional<PrepState> forced_prep = std::nullopt);

// Convenience overload that prepares the attack itself.
RunRecord run_single(const RunConfig& config, std::optional<int> forced_bit,
                     std::mt19937_64& rng);

// Pure reevaluation of the double detection test from a completed record.
DetectionOutcome detection_check(const RunRecord& record);

// Fold one run record into a counter block; run_session uses this internally
// and it lets callers rebuild statistics from stored records in any split.
void accumulate(stats::SessionStats& s, const RunRecord& record);

struct SessionTask {
    // QDC: payload bits consumed in order on encoding runs.
    std::vector<int> payload;
    // QKD: number of runs to execute.
    std::uint64_t run_count = 0;
    bool collect_records = true;
    // Safety valve for QDC sessions that cannot finish (e.g. heavy loss).
    std::uint64_t max_runs = 10'000'000;
};

struct SessionResult {
    stats::SessionStats stats;
    std::vector<RunRecord> records;
    std::vector<int> alice_bits;  // encoding-run bits in order (completed runs)
    std::vector<int> bob_bits;    // Bob's decoded bits, aligned with alice_bits
    bool aborted = false;         // QDC only: stopped at first detection
    std::uint64_t abort_run_index = 0;
    std::size_t bits_delivered = 0;
};

SessionResult run_session(const RunConfig& config, const SessionTask& task);

enum class AnomalyVerdict { Inconclusive, Ok, Anomaly };

struct LossAnomalyReport {
    AnomalyVerdict verdict = AnomalyVerdict::Inconclusive;
    double control_loss_rate = 0.0;
    double encoding_loss_rate = 0.0;
    double z = 0.0;
    double z_threshold = 0.0;
    std::uint64_t control_runs = 0;
    std::uint64_t encoding_runs = 0;
};

// Two-proportion z-test between control-run and encoding-run loss rates.
// Fewer than 100 runs in either mode is inconclusive.
LossAnomalyReport loss_anomaly_test(const stats::SessionStats& s, double significance);

struct Bb84Stats {
    std::uint64_t qubits = 0;
    std::uint64_t sifted = 0;
    std::uint64_t errors = 0;
    std::uint64_t classical_bits = 0;  // Bob's basis announcements

    double sift_fraction() const { return qubits ? double(sifted) / double(qubits) : 0.0; }
    double error_rate() const { return sifted ? double(errors) / double(sifted) : 0.0; }
    double efficiency() const {
        return (qubits + classical_bits) ? double(sifted) / double(qubits + classical_bits) : 0.0;
    }
};

// One-way BB84 with sifting; attack is NoAttack or ProjectiveInterceptResend.
Bb84Stats run_bb84_baseline(std::uint64_t n_qubits, const attacks::AttackStrategy& attack,
                            std::uint64_t seed);

}  // namespace pp84::protocol
