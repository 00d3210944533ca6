#include "pp84/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pp84::attacks {

using qmath::cplx;
using qmath::Isometry;
using qmath::MeasurementBasis;
using qmath::StateVector;

namespace {

void check_range(double v, double lo, double hi, const char* what) {
    if (!(v >= lo && v <= hi)) throw std::invalid_argument(std::string(what) + " out of range");
}

Isometry build_attack_isometry(double f, double x, double y) {
    check_range(f, 0.0, 1.0, "F");
    check_range(x, 0.0, std::numbers::pi / 2, "x");
    check_range(y, 0.0, std::numbers::pi / 2, "y");
    const double sf = std::sqrt(f);
    const double sd = std::sqrt(1.0 - f);
    // Ancilla vectors in C^4.
    const double a00[4] = {1, 0, 0, 0};
    const double a11[4] = {std::cos(x), std::sin(x), 0, 0};
    const double a01[4] = {0, 0, 1, 0};
    const double a10[4] = {0, 0, std::cos(y), std::sin(y)};

    Isometry v;
    v.dims_in = {2};
    v.dims_out = {2, 4};
    v.m.assign(8 * 2, cplx{0.0, 0.0});
    // |0> -> sqrt(F)|0>|a00> + sqrt(D)|1>|a01>
    for (int k = 0; k < 4; ++k) {
        v.m[(0 * 4 + k) * 2 + 0] = sf * a00[k];
        v.m[(1 * 4 + k) * 2 + 0] = sd * a01[k];
    }
    // |1> -> sqrt(D)|0>|a10> + sqrt(F)|1>|a11>
    for (int k = 0; k < 4; ++k) {
        v.m[(0 * 4 + k) * 2 + 1] = sd * a10[k];
        v.m[(1 * 4 + k) * 2 + 1] = sf * a11[k];
    }
    return v;
}

// Helstrom pair for two real unit vectors with overlap cos(theta) >= 0.
// Returns the two orthonormal measurement vectors; outcome 0 favors v0.
std::pair<std::vector<cplx>, std::vector<cplx>> helstrom_pair(
    const std::vector<cplx>& v0, const std::vector<cplx>& v1,
    const std::vector<cplx>* colinear_partner = nullptr) {
    const std::size_t n = v0.size();
    cplx ov{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) ov += std::conj(v0[i]) * v1[i];
    if (std::abs(ov.imag()) > qmath::kTol || ov.real() < -qmath::kTol)
        throw std::invalid_argument("helstrom: overlap must be real nonnegative");

    std::vector<cplx> u(n), w(n);
    const double c = std::clamp(ov.real(), 0.0, 1.0);
    if (1.0 - c < 1e-12) {
        // Colinear inputs: any orthogonal partner works, success degenerates to 1/2.
        u = v0;
        if (colinear_partner) {
            w = *colinear_partner;
        } else
        for (std::size_t k = 0; k < n; ++k) {
            std::fill(w.begin(), w.end(), cplx{0.0, 0.0});
            w[k] = cplx{1.0, 0.0};
            cplx p{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) p += std::conj(u[i]) * w[i];
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] -= p * u[i];
                nrm += std::norm(w[i]);
            }
            if (nrm > 1e-6) {
                nrm = std::sqrt(nrm);
                for (auto& a : w) a /= nrm;
                break;
            }
        }
    } else {
        double nu = 0.0, nw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = v0[i] + v1[i];
            w[i] = v0[i] - v1[i];
            nu += std::norm(u[i]);
            nw += std::norm(w[i]);
        }
        nu = std::sqrt(nu);
        nw = std::sqrt(nw);
        for (auto& a : u) a /= nu;
        for (auto& a : w) a /= nw;
    }
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<cplx> h0(n), h1(n);
    for (std::size_t i = 0; i < n; ++i) {
        h0[i] = s * (u[i] + w[i]);
        h1[i] = s * (u[i] - w[i]);
    }
    return {std::move(h0), std::move(h1)};
}

}  // namespace

void AttackParams::validate() const {
    check_range(f_fwd, 0.0, 1.0, "F");
    check_range(f_bwd, 0.0, 1.0, "F'");
    check_range(x, 0.0, std::numbers::pi / 2, "x");
    check_range(y, 0.0, std::numbers::pi / 2, "y");
    check_range(x_prime, 0.0, std::numbers::pi / 2, "x'");
    check_range(y_prime, 0.0, std::numbers::pi / 2, "y'");
}

Isometry build_e1_isometry(double f, double x, double y) {
    return build_attack_isometry(f, x, y);
}

Isometry build_e2_isometry(double f_prime, double x_prime, double y_prime) {
    return build_attack_isometry(f_prime, x_prime, y_prime);
}

MeasurementBasis helstrom_basis(const StateVector& v0, const StateVector& v1) {
    if (v0.dims != v1.dims) throw std::invalid_argument("helstrom: dimension mismatch");
    auto [h0, h1] = helstrom_pair(v0.amps, v1.amps);
    MeasurementBasis b;
    b.dim = static_cast<int>(v0.amps.size());
    b.vectors = {std::move(h0), std::move(h1)};
    b.labels = {"0", "1"};
    // Complete outside span{v0, v1} by Gram-Schmidt over the standard basis.
    for (int k = 0; k < b.dim && static_cast<int>(b.vectors.size()) < b.dim; ++k) {
        std::vector<cplx> w(b.dim, cplx{0.0, 0.0});
        w[k] = cplx{1.0, 0.0};
        for (const auto& prev : b.vectors) {
            cplx p{0.0, 0.0};
            for (int i = 0; i < b.dim; ++i) p += std::conj(prev[i]) * w[i];
            for (int i = 0; i < b.dim; ++i) w[i] -= p * prev[i];
        }
        double nrm = 0.0;
        for (const auto& a : w) nrm += std::norm(a);
        if (nrm > 1e-6) {
            nrm = std::sqrt(nrm);
            for (auto& a : w) a /= nrm;
            b.labels.push_back("aux" + std::to_string(b.vectors.size()));
            b.vectors.push_back(std::move(w));
        }
    }
    return b;
}

MeasurementBasis eve_ancilla_basis(double x, double y) {
    auto mk = [](double c, double s, int base) {
        std::vector<cplx> v(4, cplx{0.0, 0.0});
        v[base] = c;
        v[base + 1] = s;
        return v;
    };
    const auto e2 = mk(0, 1, 0);
    const auto e4 = mk(0, 1, 2);
    auto [h0, h1] = helstrom_pair(mk(1, 0, 0), mk(std::cos(x), std::sin(x), 0), &e2);
    auto [g0, g1] = helstrom_pair(mk(1, 0, 2), mk(std::cos(y), std::sin(y), 2), &e4);
    MeasurementBasis b;
    b.dim = 4;
    b.vectors = {std::move(h0), std::move(h1), std::move(g0), std::move(g1)};
    b.labels = {"00", "11", "01", "10"};
    return b;
}

std::pair<EveRecord, StateVector> eve_measure_and_infer(const StateVector& state,
                                                        const AttackParams& params,
                                                        int eps_subsystem, int eta_subsystem,
                                                        std::mt19937_64& rng) {
    MeasurementBasis eps_basis = eve_ancilla_basis(params.x, params.y);
    MeasurementBasis eta_basis = eve_ancilla_basis(params.x_prime, params.y_prime);
    auto eps = qmath::measure(state, eps_basis, eps_subsystem, rng);
    auto eta = qmath::measure(eps.state, eta_basis, eta_subsystem, rng);
    EveRecord rec;
    rec.eps_label = eps.label;
    rec.eta_label = eta.label;
    rec.eps_guess = eps.label[1] - '0';  // label the qubit carried toward Alice
    rec.eta_guess = eta.label[0] - '0';  // label the qubit carried back to E2
    rec.op_guess = (rec.eps_guess == rec.eta_guess) ? 0 : 1;
    return {rec, std::move(eta.state)};
}

std::pair<int, StateVector> projective_attack_step(const StateVector& s, bool basis_is_x,
                                                   std::mt19937_64& rng) {
    auto mr = qmath::measure(s, basis_is_x ? MeasurementBasis::x() : MeasurementBasis::z(), 0, rng);
    return {static_cast<int>(mr.index), std::move(mr.state)};
}

}  // namespace pp84::attacks
