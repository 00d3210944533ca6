// Command-line frontend: run simulations and parameter sweeps, emit
// reproducible CSV/JSON, and print the security threshold and efficiency
// tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pp84/analytics.hpp"
#include "pp84/protocol.hpp"

using json = nlohmann::ordered_json;
using namespace pp84;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidParam = 2;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

struct CommonOpts {
    std::string attack = "none";
    std::uint64_t seed = 0;
    std::uint64_t runs = 10000;
    double control_prob = 0.5;
    double loss_p = 1.0;
    double f_fwd = 1.0, x = 0.0, y = 0.0;
    double f_bwd = 1.0, x_prime = 0.0, y_prime = 0.0;
    std::string format = "json";
    std::string output;  // empty = stdout
};

void add_attack_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--attack", o.attack, "Attack strategy: none|projective|incoherent");
    cmd->add_option("--f-fwd", o.f_fwd, "Forward no-flip weight F");
    cmd->add_option("--x", o.x, "Forward no-flip overlap angle x (radians)");
    cmd->add_option("--y", o.y, "Forward flip overlap angle y (radians)");
    cmd->add_option("--f-bwd", o.f_bwd, "Backward no-flip weight F'");
    cmd->add_option("--x-prime", o.x_prime, "Backward no-flip overlap angle x'");
    cmd->add_option("--y-prime", o.y_prime, "Backward flip overlap angle y'");
}

attacks::AttackStrategy make_attack(const CommonOpts& o) {
    if (o.attack == "none") return attacks::NoAttack{};
    if (o.attack == "projective") return attacks::ProjectiveInterceptResend{};
    if (o.attack == "incoherent")
        return attacks::IncoherentTwoAncilla{
            {o.f_fwd, o.x, o.y, o.f_bwd, o.x_prime, o.y_prime}};
    throw std::invalid_argument("unknown attack kind: " + o.attack);
}

protocol::RunConfig make_config(const CommonOpts& o, protocol::Mode mode) {
    protocol::RunConfig cfg;
    cfg.control_prob = o.control_prob;
    cfg.attack = make_attack(o);
    cfg.transmission_prob = o.loss_p;
    cfg.mode = mode;
    cfg.seed = o.seed;
    cfg.validate();
    return cfg;
}

int write_out(const CommonOpts& o, const std::string& text) {
    if (o.output.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return kExitOk;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open output file: " << o.output << "\n";
        return kExitUsage;
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    return kExitOk;
}

std::string transcript_csv(const std::vector<protocol::RunRecord>& records) {
    std::string out =
        "run,prep,mode,alice_basis,alice_outcome,alice_op,bob_outcome,detection,"
        "lost_fwd,lost_bwd\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out += std::to_string(i);
        out += ',';
        out += protocol::to_string(r.prep);
        out += ',';
        out += (r.mode_taken == protocol::RunMode::Control) ? "control" : "encoding";
        out += ',';
        out += r.alice_basis ? protocol::to_string(*r.alice_basis) : "";
        out += ',';
        out += r.alice_outcome ? std::to_string(*r.alice_outcome) : "";
        out += ',';
        out += r.alice_op ? (*r.alice_op == protocol::EncodingOp::I ? "I" : "iY") : "";
        out += ',';
        out += r.bob_outcome ? std::to_string(*r.bob_outcome) : "";
        out += ',';
        out += protocol::to_string(r.detection);
        out += ',';
        out += r.lost_forward ? "1" : "0";
        out += ',';
        out += r.lost_backward ? "1" : "0";
        out += '\n';
    }
    return out;
}

json report_to_json(const stats::ComparisonReport& r) {
    return json{{"quantity", r.quantity}, {"analytic", r.analytic},
                {"empirical", r.empirical}, {"stderr", r.std_error},
                {"z", std::isfinite(r.z) ? r.z : 1e300},
                {"verdict", r.pass ? "pass" : "fail"}};
}

json stats_to_json(const stats::SessionStats& s) {
    return json{{"total_runs", s.total_runs},
                {"control_runs", s.runs_by_mode[0]},
                {"encoding_runs", s.runs_by_mode[1]},
                {"applicable_checks", s.applicable_checks},
                {"detect_e1", s.detect_e1},
                {"detect_e2", s.detect_e2},
                {"pass_checks", s.pass_checks},
                {"encoding_completed", s.encoding_completed},
                {"lost_control", s.lost_by_mode(0)},
                {"lost_encoding", s.lost_by_mode(1)},
                {"joint_ab", {s.joint_ab[0][0], s.joint_ab[0][1], s.joint_ab[1][0],
                              s.joint_ab[1][1]}},
                {"joint_ae", {s.joint_ae[0][0], s.joint_ae[0][1], s.joint_ae[1][0],
                              s.joint_ae[1][1]}}};
}

int cmd_simulate(const CommonOpts& o) {
    protocol::RunConfig cfg = make_config(o, protocol::Mode::QKD);
    protocol::SessionTask task;
    task.run_count = o.runs;
    task.collect_records = (o.format == "csv");
    protocol::SessionResult res = protocol::run_session(cfg, task);

    if (o.format == "csv") return write_out(o, transcript_csv(res.records));

    std::vector<stats::ComparisonReport> reports;
    const double sig = 0.05;
    if (res.stats.applicable_checks > 0) {
        double analytic_d = 0.0;
        if (o.attack == "projective") analytic_d = 0.375;
        if (o.attack == "incoherent")
            analytic_d = analytics::p_d_average(o.f_fwd, o.x, o.y, o.f_bwd, o.x_prime, o.y_prime);
        reports.push_back(stats::compare("detection_rate", analytic_d,
                                         stats::estimate_detection(res.stats), sig));
    }
    if (res.stats.encoding_completed > 0) {
        const double n = static_cast<double>(res.stats.encoding_completed);
        const double err =
            static_cast<double>(res.stats.joint_ab[0][1] + res.stats.joint_ab[1][0]) / n;
        std::optional<double> analytic_err;
        if (o.attack == "none") analytic_err = 0.0;
        if (o.attack == "projective") analytic_err = 0.25;
        if (o.attack == "incoherent" && o.f_fwd == 1.0 && o.f_bwd == 1.0)
            analytic_err = 0.25 * (1.0 - std::cos(o.x) * std::cos(o.x_prime));
        if (analytic_err)
            reports.push_back(stats::compare(
                "bob_error_rate", *analytic_err,
                stats::Estimate{err, std::sqrt(err * (1.0 - err) / n)}, sig));
        if (o.attack == "incoherent" && o.f_fwd == 1.0 && o.f_bwd == 1.0) {
            const double correct =
                static_cast<double>(res.stats.joint_ae[0][0] + res.stats.joint_ae[1][1]) / n;
            const double analytic = 0.5 * (1.0 + std::sin(o.x) * std::sin(o.x_prime));
            reports.push_back(stats::compare(
                "eve_correct_rate", analytic,
                stats::Estimate{correct, std::sqrt(correct * (1.0 - correct) / n)}, sig));
        }
    }

    json out;
    out["stats"] = stats_to_json(res.stats);
    out["reports"] = json::array();
    for (const auto& r : reports) out["reports"].push_back(report_to_json(r));
    return write_out(o, out.dump(2) + "\n");
}

int cmd_curves(const CommonOpts& o, std::size_t points) {
    if (points < 2) {
        std::cerr << "curves: grid must have at least 2 points\n";
        return kExitInvalidParam;
    }
    std::string out = "x,d,i_ab,i_ae,i_ae_bound\n";
    for (std::size_t i = 0; i < points; ++i) {
        const double x = (std::numbers::pi / 2.0) * static_cast<double>(i) /
                         static_cast<double>(points - 1);
        out += num(x) + "," + num(analytics::d_balanced(x)) + "," + num(analytics::i_ab(x)) +
               "," + num(analytics::i_ae(x, x)) + "," + num(analytics::i_ae_bound(x)) + "\n";
    }
    return write_out(o, out);
}

int cmd_thresholds(const CommonOpts& o) {
    const auto inc = analytics::security_threshold(analytics::EveCurve::Incoherent);
    const auto bnd = analytics::security_threshold(analytics::EveCurve::Bound);
    std::string out;
    out += "d_star_incoherent," + num(inc.d_star) + "\n";
    out += "d_star_bound," + num(bnd.d_star) + "\n";
    out += "bb84_reference," + num(analytics::kBb84ThresholdReference) + "\n";
    return write_out(o, out);
}

int cmd_efficiency(const CommonOpts& o, std::size_t points) {
    if (points < 2) {
        std::cerr << "efficiency: grid must have at least 2 points\n";
        return kExitInvalidParam;
    }
    std::string out = "P,pp84_eff,bb84_eff\n";
    for (std::size_t i = 1; i <= points; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(points);
        const auto pp84 = analytics::efficiency({1.0, 1.0, 0.0, p});
        out += num(p) + "," + num(pp84.e_practical) + "," + num(0.25 * p) + "\n";
    }
    out += "# crossover_P," + num(analytics::efficiency_crossover()) + "\n";
    return write_out(o, out);
}

std::optional<std::vector<int>> parse_hex_payload(const std::string& hex) {
    if (hex.empty() || hex.size() % 2 != 0) return std::nullopt;
    std::vector<int> bits;
    for (char ch : hex) {
        int v;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
        else return std::nullopt;
        for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1);
    }
    return bits;
}

std::string bits_to_hex(const std::vector<int>& bits) {
    std::string out;
    for (std::size_t i = 0; i + 3 < bits.size(); i += 4) {
        const int v = bits[i] * 8 + bits[i + 1] * 4 + bits[i + 2] * 2 + bits[i + 3];
        out += "0123456789abcdef"[v];
    }
    return out;
}

int cmd_qdc_send(const CommonOpts& o, const std::string& payload_hex) {
    auto payload = parse_hex_payload(payload_hex);
    if (!payload) {
        std::cerr << "qdc-send: payload must be a nonempty even-length hex string\n";
        return kExitUsage;
    }
    protocol::RunConfig cfg = make_config(o, protocol::Mode::QDC);
    protocol::SessionTask task;
    task.payload = *payload;
    task.collect_records = false;
    protocol::SessionResult res = protocol::run_session(cfg, task);
    std::string out;
    out += std::string("status,") + (res.aborted ? "aborted" : "delivered") + "\n";
    out += "bits_delivered," + std::to_string(res.bits_delivered) + "\n";
    if (res.aborted)
        out += "abort_run_index," + std::to_string(res.abort_run_index) + "\n";
    else
        out += "bob_hex," + bits_to_hex(res.bob_bits) + "\n";
    return write_out(o, out);
}

int cmd_bb84(const CommonOpts& o, std::uint64_t qubits) {
    if (o.attack == "incoherent") {
        std::cerr << "bb84-baseline: attack must be none or projective\n";
        return kExitInvalidParam;
    }
    auto s = protocol::run_bb84_baseline(qubits, make_attack(o), o.seed);
    std::string out;
    out += "qubits," + std::to_string(s.qubits) + "\n";
    out += "sifted," + std::to_string(s.sifted) + "\n";
    out += "sift_fraction," + num(s.sift_fraction()) + "\n";
    out += "error_rate," + num(s.error_rate()) + "\n";
    out += "efficiency," + num(s.efficiency()) + "\n";
    return write_out(o, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PP84 two-way deterministic quantum communication simulator"};
    app.require_subcommand(1);

    CommonOpts o;
    std::size_t points = 50;
    std::uint64_t qubits = 100000;
    std::string payload_hex;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "Master RNG seed");
        cmd->add_option("--format", o.format, "Output format: json|csv");
        cmd->add_option("--output", o.output, "Output path (default: stdout)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Run a QKD-style session and report");
    add_common(sim);
    add_attack_flags(sim, o);
    sim->add_option("--runs", o.runs, "Number of protocol runs");
    sim->add_option("--control-prob", o.control_prob, "Control-mode probability c");
    sim->add_option("--loss-p", o.loss_p, "One-way transmission probability P");

    CLI::App* curves = app.add_subcommand("curves", "Information vs detection curve data");
    add_common(curves);
    curves->add_option("--points", points, "Grid size over x in [0, pi/2]");

    CLI::App* thresholds = app.add_subcommand("thresholds", "Security thresholds");
    add_common(thresholds);

    CLI::App* eff = app.add_subcommand("efficiency", "Efficiency vs transmission table");
    add_common(eff);
    eff->add_option("--points", points, "Grid size over P in (0, 1]");

    CLI::App* qdc = app.add_subcommand("qdc-send", "Run one QDC session with a payload");
    add_common(qdc);
    add_attack_flags(qdc, o);
    qdc->add_option("--payload", payload_hex, "Payload as hex string");
    qdc->add_option("--control-prob", o.control_prob, "Control-mode probability c");
    qdc->add_option("--loss-p", o.loss_p, "One-way transmission probability P");

    CLI::App* bb84 = app.add_subcommand("bb84-baseline", "One-way BB84 baseline");
    add_common(bb84);
    bb84->add_option("--qubits", qubits, "Number of transmitted qubits");
    bb84->add_option("--attack", o.attack, "none|projective");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (curves->parsed()) return cmd_curves(o, points);
        if (thresholds->parsed()) return cmd_thresholds(o);
        if (eff->parsed()) return cmd_efficiency(o, points);
        if (qdc->parsed()) return cmd_qdc_send(o, payload_hex);
        if (bb84->parsed()) return cmd_bb84(o, qubits);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kExitInvalidParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidParam;
    }
    return kExitUsage;
}
