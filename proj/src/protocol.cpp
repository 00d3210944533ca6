#include "pp84/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "pp84/rng.hpp"

namespace pp84::protocol {

using attacks::AttackStrategy;
using attacks::IncoherentTwoAncilla;
using attacks::NoAttack;
using attacks::ProjectiveInterceptResend;
using qmath::cplx;
using qmath::Isometry;
using qmath::MeasurementBasis;
using qmath::StateVector;

Basis basis_of(PrepState s) {
    return (s == PrepState::Zero || s == PrepState::One) ? Basis::Z : Basis::X;
}

int label_of(PrepState s) {
    return (s == PrepState::One || s == PrepState::Minus) ? 1 : 0;
}

std::string to_string(PrepState s) {
    switch (s) {
        case PrepState::Zero: return "0";
        case PrepState::One: return "1";
        case PrepState::Plus: return "+";
        default: return "-";
    }
}

std::string to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

std::string to_string(DetectionOutcome d) {
    switch (d) {
        case DetectionOutcome::NotApplicable: return "na";
        case DetectionOutcome::Pass: return "pass";
        case DetectionOutcome::DetectE1: return "detect_e1";
        default: return "detect_e2";
    }
}

void RunConfig::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(control_prob)) throw std::invalid_argument("control_prob out of [0,1]");
    if (!(transmission_prob > 0.0 && transmission_prob <= 1.0))
        throw std::invalid_argument("transmission_prob out of (0,1]");
    if (transmission_control && !(*transmission_control > 0.0 && *transmission_control <= 1.0))
        throw std::invalid_argument("transmission_control out of (0,1]");
    if (transmission_encoding && !(*transmission_encoding > 0.0 && *transmission_encoding <= 1.0))
        throw std::invalid_argument("transmission_encoding out of (0,1]");
    if (const auto* inc = std::get_if<IncoherentTwoAncilla>(&attack)) inc->params.validate();
}

std::optional<int> RunRecord::decoded_bit() const {
    if (mode_taken != RunMode::Encoding || !bob_outcome) return std::nullopt;
    return (*bob_outcome == label_of(prep)) ? 0 : 1;
}

std::optional<int> RunRecord::alice_bit() const {
    if (!alice_op) return std::nullopt;
    return static_cast<int>(*alice_op);
}

PreparedAttack PreparedAttack::from(const AttackStrategy& strategy) {
    PreparedAttack p;
    if (std::holds_alternative<ProjectiveInterceptResend>(strategy)) {
        p.kind = Kind::Projective;
    } else if (const auto* inc = std::get_if<IncoherentTwoAncilla>(&strategy)) {
        p.kind = Kind::Incoherent;
        p.params = inc->params;
        p.params.validate();
        p.e1 = attacks::build_e1_isometry(p.params.f_fwd, p.params.x, p.params.y);
        p.e2 = attacks::build_e2_isometry(p.params.f_bwd, p.params.x_prime, p.params.y_prime);
    }
    return p;
}

namespace {

StateVector prep_state(PrepState s) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (s) {
        case PrepState::Zero: return StateVector{{cplx{1, 0}, cplx{0, 0}}, {2}};
        case PrepState::One: return StateVector{{cplx{0, 0}, cplx{1, 0}}, {2}};
        case PrepState::Plus: return StateVector{{cplx{r, 0}, cplx{r, 0}}, {2}};
        default: return StateVector{{cplx{r, 0}, cplx{-r, 0}}, {2}};
    }
}

const MeasurementBasis& basis_for(Basis b) {
    static const MeasurementBasis z = MeasurementBasis::z();
    static const MeasurementBasis x = MeasurementBasis::x();
    return b == Basis::Z ? z : x;
}

// iY = ZX acting on the qubit subsystem: |0> -> -|1>, |1> -> |0>.
const Isometry& iy_gate() {
    static const Isometry g{{cplx{0, 0}, cplx{1, 0}, cplx{-1, 0}, cplx{0, 0}}, {2}, {2}};
    return g;
}

}  // namespace

DetectionOutcome detection_check(const RunRecord& record) {
    if (record.lost() || record.mode_taken != RunMode::Control) return DetectionOutcome::NotApplicable;
    if (!record.alice_basis || *record.alice_basis != basis_of(record.prep))
        return DetectionOutcome::NotApplicable;
    if (*record.alice_outcome != label_of(record.prep)) return DetectionOutcome::DetectE1;
    if (*record.bob_outcome != *record.alice_outcome) return DetectionOutcome::DetectE2;
    return DetectionOutcome::Pass;
}

RunRecord run_single(const RunConfig& config, const PreparedAttack& attack,
                     std::optional<int> forced_bit, std::mt19937_64& rng,
                     std::optional<PrepState> forced_prep) {
    RunRecord rec;
    rec.prep = forced_prep ? *forced_prep
                           : static_cast<PrepState>(std::uniform_int_distribution<int>(0, 3)(rng));
    rec.mode_taken = chance(config.control_prob, rng) ? RunMode::Control : RunMode::Encoding;

    const double pass_prob =
        (rec.mode_taken == RunMode::Control)
            ? config.transmission_control.value_or(config.transmission_prob)
            : config.transmission_encoding.value_or(config.transmission_prob);

    // The attack never sees the mode: its inputs are the traveling state and
    // its own randomness only.
    std::optional<bool> eve_basis_is_x;
    if (attack.kind == PreparedAttack::Kind::Projective) eve_basis_is_x = chance(0.5, rng);

    if (!chance(pass_prob, rng)) {
        rec.lost_forward = true;
        return rec;
    }

    StateVector psi = prep_state(rec.prep);
    attacks::EveRecord eve;
    bool eps_measured = false;

    // E1 attack point.
    switch (attack.kind) {
        case PreparedAttack::Kind::None:
            break;
        case PreparedAttack::Kind::Projective: {
            auto [label, out] = attacks::projective_attack_step(psi, *eve_basis_is_x, rng);
            eve.eps_guess = label;
            eve.eps_label = (*eve_basis_is_x ? "X" : "Z") + std::to_string(label);
            psi = std::move(out);
            break;
        }
        case PreparedAttack::Kind::Incoherent: {
            psi = qmath::apply_isometry(attack.e1, psi, {0});  // dims {2,4}, eps at 1
            if (config.eve_timing == EveTiming::Interleaved) {
                auto mr = qmath::measure(psi, attacks::eve_ancilla_basis(attack.params.x,
                                                                         attack.params.y),
                                         1, rng);
                eve.eps_label = mr.label;
                eve.eps_guess = mr.label[1] - '0';
                psi = std::move(mr.state);
                eps_measured = true;
            }
            break;
        }
    }

    // Alice: control measurement or encoding operation.
    if (rec.mode_taken == RunMode::Control) {
        rec.alice_basis = chance(0.5, rng) ? Basis::Z : Basis::X;
        auto mr = qmath::measure(psi, basis_for(*rec.alice_basis), 0, rng);
        rec.alice_outcome = static_cast<int>(mr.index);
        psi = std::move(mr.state);  // she resends her post-measurement eigenstate
    } else {
        const int bit = forced_bit ? *forced_bit : (chance(0.5, rng) ? 1 : 0);
        rec.alice_op = static_cast<EncodingOp>(bit);
        if (bit == 1) psi = qmath::apply_isometry(iy_gate(), psi, {0});
    }

    // E2 attack point.
    switch (attack.kind) {
        case PreparedAttack::Kind::None:
            break;
        case PreparedAttack::Kind::Projective: {
            auto [label, out] = attacks::projective_attack_step(psi, *eve_basis_is_x, rng);
            eve.eta_guess = label;
            eve.eta_label = (*eve_basis_is_x ? "X" : "Z") + std::to_string(label);
            eve.op_guess = (eve.eps_guess == eve.eta_guess) ? 0 : 1;
            psi = std::move(out);
            rec.eve_record = eve;
            break;
        }
        case PreparedAttack::Kind::Incoherent: {
            psi = qmath::apply_isometry(attack.e2, psi, {0});  // eta appended at the end
            const int eta_sub = static_cast<int>(psi.dims.size()) - 1;
            if (eps_measured) {
                auto mr = qmath::measure(
                    psi, attacks::eve_ancilla_basis(attack.params.x_prime, attack.params.y_prime),
                    eta_sub, rng);
                eve.eta_label = mr.label;
                eve.eta_guess = mr.label[0] - '0';
                eve.op_guess = (eve.eps_guess == eve.eta_guess) ? 0 : 1;
                psi = std::move(mr.state);
            } else {
                auto [record, out] = attacks::eve_measure_and_infer(psi, attack.params, 1, eta_sub, rng);
                eve = record;
                psi = std::move(out);
            }
            rec.eve_record = eve;
            break;
        }
    }

    if (!chance(pass_prob, rng)) {
        rec.lost_backward = true;
        return rec;
    }

    // Bob decodes in his preparation basis.
    auto mr = qmath::measure(psi, basis_for(basis_of(rec.prep)), 0, rng);
    rec.bob_outcome = static_cast<int>(mr.index);
    rec.detection = detection_check(rec);
    return rec;
}

RunRecord run_single(const RunConfig& config, std::optional<int> forced_bit,
                     std::mt19937_64& rng) {
    return run_single(config, PreparedAttack::from(config.attack), forced_bit, rng);
}

void accumulate(stats::SessionStats& s, const RunRecord& rec) {
    const int mode = (rec.mode_taken == RunMode::Control) ? 0 : 1;
    s.total_runs++;
    s.runs_by_mode[mode]++;
    s.prep_counts[static_cast<int>(rec.prep)]++;
    if (rec.lost_forward) s.lost_forward_by_mode[mode]++;
    if (rec.lost_backward) s.lost_backward_by_mode[mode]++;
    if (mode == 1) s.encoding_runs++;
    if (rec.lost()) return;

    if (rec.mode_taken == RunMode::Control) {
        if (*rec.alice_basis == basis_of(rec.prep)) {
            s.control_matched++;
            s.applicable_checks++;
            switch (rec.detection) {
                case DetectionOutcome::DetectE1: s.detect_e1++; break;
                case DetectionOutcome::DetectE2: s.detect_e2++; break;
                case DetectionOutcome::Pass: s.pass_checks++; break;
                default: break;
            }
        } else {
            s.control_mismatched++;
        }
    } else {
        const int a = *rec.alice_bit();
        const int b = *rec.decoded_bit();
        s.encoding_completed++;
        s.joint_ab[a][b]++;
        if (basis_of(rec.prep) == Basis::Z)
            s.joint_ab_z[a][b]++;
        else
            s.joint_ab_x[a][b]++;
        if (rec.eve_record) s.joint_ae[a][rec.eve_record->op_guess]++;
    }
}

SessionResult run_session(const RunConfig& config, const SessionTask& task) {
    config.validate();
    if (config.mode == Mode::QDC && task.payload.empty())
        throw std::invalid_argument("QDC session requires a payload");
    if (config.mode == Mode::QKD && task.run_count == 0)
        throw std::invalid_argument("QKD session requires a run count");

    const PreparedAttack attack = PreparedAttack::from(config.attack);
    SessionResult res;
    std::size_t payload_pos = 0;

    for (std::uint64_t i = 0;; ++i) {
        if (config.mode == Mode::QKD) {
            if (i >= task.run_count) break;
        } else {
            if (payload_pos >= task.payload.size() || i >= task.max_runs) break;
        }
        std::mt19937_64 rng = run_rng(config.seed, i);
        std::optional<int> forced;
        if (config.mode == Mode::QDC) forced = task.payload[payload_pos];
        RunRecord rec = run_single(config, attack, forced, rng);
        accumulate(res.stats, rec);
        if (task.collect_records) res.records.push_back(rec);
        if (rec.mode_taken == RunMode::Encoding && !rec.lost()) {
            res.alice_bits.push_back(*rec.alice_bit());
            res.bob_bits.push_back(*rec.decoded_bit());
            if (config.mode == Mode::QDC) payload_pos++;
        }
        // QDC settles the public debate run by run and aborts on detection;
        // QKD defers all discussion to the end of the session.
        if (config.mode == Mode::QDC && (rec.detection == DetectionOutcome::DetectE1 ||
                                         rec.detection == DetectionOutcome::DetectE2)) {
            res.aborted = true;
            res.abort_run_index = i;
            break;
        }
    }
    res.bits_delivered = (config.mode == Mode::QDC) ? payload_pos : res.alice_bits.size();
    return res;
}

LossAnomalyReport loss_anomaly_test(const stats::SessionStats& s, double significance) {
    if (!(significance > 0.0 && significance < 1.0))
        throw std::invalid_argument("significance out of (0,1)");
    LossAnomalyReport r;
    r.control_runs = s.runs_by_mode[0];
    r.encoding_runs = s.runs_by_mode[1];
    r.z_threshold = stats::normal_quantile(1.0 - significance / 2.0);
    if (r.control_runs < 100 || r.encoding_runs < 100) {
        r.verdict = AnomalyVerdict::Inconclusive;
        return r;
    }
    const double n1 = static_cast<double>(r.control_runs);
    const double n2 = static_cast<double>(r.encoding_runs);
    const double x1 = static_cast<double>(s.lost_by_mode(0));
    const double x2 = static_cast<double>(s.lost_by_mode(1));
    r.control_loss_rate = x1 / n1;
    r.encoding_loss_rate = x2 / n2;
    const double pooled = (x1 + x2) / (n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    r.z = (se > 0.0) ? (r.control_loss_rate - r.encoding_loss_rate) / se : 0.0;
    r.verdict = (std::abs(r.z) > r.z_threshold) ? AnomalyVerdict::Anomaly : AnomalyVerdict::Ok;
    return r;
}

Bb84Stats run_bb84_baseline(std::uint64_t n_qubits, const AttackStrategy& attack,
                            std::uint64_t seed) {
    if (n_qubits == 0) throw std::invalid_argument("need at least one qubit");
    if (std::holds_alternative<IncoherentTwoAncilla>(attack))
        throw std::invalid_argument("BB84 baseline supports none or projective attacks");
    const bool eavesdrop = std::holds_alternative<ProjectiveInterceptResend>(attack);

    Bb84Stats out;
    out.qubits = n_qubits;
    out.classical_bits = n_qubits;  // Bob announces his basis once per qubit
    for (std::uint64_t i = 0; i < n_qubits; ++i) {
        std::mt19937_64 rng = run_rng(seed, i);
        const int bit = chance(0.5, rng) ? 1 : 0;
        const bool basis_x = chance(0.5, rng);
        StateVector psi = prep_state(static_cast<PrepState>((basis_x ? 2 : 0) + bit));
        if (eavesdrop) {
            const bool eve_x = chance(0.5, rng);
            psi = attacks::projective_attack_step(psi, eve_x, rng).second;
        }
        const bool bob_x = chance(0.5, rng);
        auto mr = qmath::measure(psi, basis_for(bob_x ? Basis::X : Basis::Z), 0, rng);
        if (bob_x == basis_x) {
            out.sifted++;
            if (static_cast<int>(mr.index) != bit) out.errors++;
        }
    }
    return out;
}

}  // namespace pp84::protocol
