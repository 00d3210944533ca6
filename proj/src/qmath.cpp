#include "pp84/qmath.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pp84/rng.hpp"

namespace pp84::qmath {

namespace {

std::size_t dims_product(const std::vector<int>& dims) {
    std::size_t p = 1;
    for (int d : dims) {
        if (d <= 0) throw std::invalid_argument("subsystem dimension must be positive");
        p *= static_cast<std::size_t>(d);
    }
    return p;
}

}  // namespace

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::validate() const {
    if (dims_product(dims) != amps.size())
        throw std::invalid_argument("dims product does not match amplitude count");
    if (std::abs(norm() - 1.0) > kTol)
        throw std::invalid_argument("state vector is not unit norm");
}

StateVector StateVector::basis_state(std::vector<int> dims, std::size_t index) {
    std::size_t n = dims_product(dims);
    if (index >= n) throw std::invalid_argument("basis index out of range");
    StateVector s{std::vector<cplx>(n, cplx{0.0, 0.0}), std::move(dims)};
    s.amps[index] = cplx{1.0, 0.0};
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<int> dims, std::vector<cplx> amps) {
    StateVector s{std::move(amps), std::move(dims)};
    s.validate();
    return s;
}

std::size_t Isometry::dim_in() const { return dims_product(dims_in); }
std::size_t Isometry::dim_out() const { return dims_product(dims_out); }

void Isometry::validate() const {
    std::size_t din = dim_in(), dout = dim_out();
    if (dout < din) throw std::invalid_argument("isometry must not shrink the space");
    if (m.size() != din * dout) throw std::invalid_argument("isometry matrix shape mismatch");
    for (std::size_t c1 = 0; c1 < din; ++c1) {
        for (std::size_t c2 = c1; c2 < din; ++c2) {
            cplx g{0.0, 0.0};
            for (std::size_t r = 0; r < dout; ++r) g += std::conj(at(r, c1)) * at(r, c2);
            cplx want = (c1 == c2) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(g - want) > kTol)
                throw std::invalid_argument("isometry columns are not orthonormal");
        }
    }
}

void MeasurementBasis::validate() const {
    if (vectors.empty() || static_cast<int>(vectors.size()) != dim)
        throw std::invalid_argument("basis must have dim vectors");
    if (labels.size() != vectors.size())
        throw std::invalid_argument("one label per basis vector required");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (static_cast<int>(vectors[i].size()) != dim)
            throw std::invalid_argument("basis vector length mismatch");
        for (std::size_t j = i; j < vectors.size(); ++j) {
            cplx g{0.0, 0.0};
            for (int k = 0; k < dim; ++k) g += std::conj(vectors[i][k]) * vectors[j][k];
            cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(g - want) > kTol)
                throw std::invalid_argument("basis vectors are not orthonormal");
        }
    }
}

MeasurementBasis MeasurementBasis::z() {
    return MeasurementBasis{2, {{cplx{1, 0}, cplx{0, 0}}, {cplx{0, 0}, cplx{1, 0}}}, {"0", "1"}};
}

MeasurementBasis MeasurementBasis::x() {
    const double s = 1.0 / std::sqrt(2.0);
    return MeasurementBasis{
        2, {{cplx{s, 0}, cplx{s, 0}}, {cplx{s, 0}, cplx{-s, 0}}}, {"+", "-"}};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector out;
    out.dims = a.dims;
    out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
    out.amps.resize(a.amps.size() * b.amps.size());
    std::size_t nb = b.amps.size();
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        for (std::size_t j = 0; j < nb; ++j) out.amps[i * nb + j] = a.amps[i] * b.amps[j];
    return out;
}

StateVector apply_isometry(const Isometry& v, const StateVector& s,
                           const std::vector<int>& targets) {
    const std::size_t k = targets.size();
    if (v.dims_in.size() != k)
        throw std::invalid_argument("target count must match isometry input subsystems");
    const std::size_t nsub = s.dims.size();
    for (std::size_t i = 0; i < k; ++i) {
        int t = targets[i];
        if (t < 0 || static_cast<std::size_t>(t) >= nsub)
            throw std::invalid_argument("target subsystem index out of range");
        if (i > 0 && targets[i] <= targets[i - 1])
            throw std::invalid_argument("targets must be strictly ascending");
        if (s.dims[t] != v.dims_in[i])
            throw std::invalid_argument("target subsystem dimension mismatch");
    }
    if (v.dims_out.size() < k)
        throw std::invalid_argument("isometry output needs at least one subsystem per target");

    std::vector<int> out_dims = s.dims;
    for (std::size_t i = 0; i < k; ++i) out_dims[targets[i]] = v.dims_out[i];
    for (std::size_t i = k; i < v.dims_out.size(); ++i) out_dims.push_back(v.dims_out[i]);

    const std::size_t n_in = s.amps.size();
    const std::size_t rows = v.dim_out();
    const std::size_t n_out_dims = out_dims.size();

    std::vector<std::size_t> out_strides(n_out_dims);
    {
        std::size_t st = 1;
        for (std::size_t i = n_out_dims; i-- > 0;) {
            out_strides[i] = st;
            st *= static_cast<std::size_t>(out_dims[i]);
        }
    }
    std::size_t n_out = 1;
    for (int d : out_dims) n_out *= static_cast<std::size_t>(d);

    std::vector<bool> is_target(nsub, false);
    for (int t : targets) is_target[t] = true;

    // Per-row digit decomposition over v.dims_out, fixed for the whole apply.
    std::vector<std::vector<int>> row_digits(rows, std::vector<int>(v.dims_out.size()));
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t rest = r;
        for (std::size_t i = v.dims_out.size(); i-- > 0;) {
            row_digits[r][i] = static_cast<int>(rest % v.dims_out[i]);
            rest /= static_cast<std::size_t>(v.dims_out[i]);
        }
    }

    std::vector<cplx> out(n_out, cplx{0.0, 0.0});
    std::vector<int> digits(nsub);
    for (std::size_t idx = 0; idx < n_in; ++idx) {
        const cplx amp = s.amps[idx];
        if (amp == cplx{0.0, 0.0}) continue;
        std::size_t rest = idx;
        for (std::size_t i = nsub; i-- > 0;) {
            digits[i] = static_cast<int>(rest % s.dims[i]);
            rest /= static_cast<std::size_t>(s.dims[i]);
        }
        std::size_t col = 0;
        for (std::size_t i = 0; i < k; ++i)
            col = col * static_cast<std::size_t>(v.dims_in[i]) + digits[targets[i]];
        std::size_t base = 0;
        for (std::size_t p = 0; p < nsub; ++p)
            if (!is_target[p]) base += static_cast<std::size_t>(digits[p]) * out_strides[p];
        for (std::size_t r = 0; r < rows; ++r) {
            const cplx w = v.at(r, col);
            if (w == cplx{0.0, 0.0}) continue;
            std::size_t oi = base;
            for (std::size_t i = 0; i < k; ++i)
                oi += static_cast<std::size_t>(row_digits[r][i]) * out_strides[targets[i]];
            for (std::size_t i = k; i < v.dims_out.size(); ++i)
                oi += static_cast<std::size_t>(row_digits[r][i]) * out_strides[nsub + (i - k)];
            out[oi] += w * amp;
        }
    }
    return StateVector{std::move(out), std::move(out_dims)};
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dims != b.dims) throw std::invalid_argument("inner: dimension mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

namespace {

struct SubsystemView {
    std::size_t pre, d, post;
};

SubsystemView view_of(const StateVector& s, int subsystem) {
    if (subsystem < 0 || static_cast<std::size_t>(subsystem) >= s.dims.size())
        throw std::invalid_argument("subsystem index out of range");
    SubsystemView v{1, static_cast<std::size_t>(s.dims[subsystem]), 1};
    for (int i = 0; i < subsystem; ++i) v.pre *= static_cast<std::size_t>(s.dims[i]);
    for (std::size_t i = subsystem + 1; i < s.dims.size(); ++i)
        v.post *= static_cast<std::size_t>(s.dims[i]);
    return v;
}

// Projection coefficients <v_k| psi> for every (pre, post) block.
void project(const StateVector& s, const SubsystemView& vw, const std::vector<cplx>& vec,
             std::vector<cplx>& coeff) {
    coeff.assign(vw.pre * vw.post, cplx{0.0, 0.0});
    for (std::size_t p = 0; p < vw.pre; ++p)
        for (std::size_t j = 0; j < vw.d; ++j) {
            const cplx c = std::conj(vec[j]);
            if (c == cplx{0.0, 0.0}) continue;
            const std::size_t base = (p * vw.d + j) * vw.post;
            for (std::size_t q = 0; q < vw.post; ++q)
                coeff[p * vw.post + q] += c * s.amps[base + q];
        }
}

}  // namespace

std::vector<double> born_probabilities(const StateVector& s,
                                       const MeasurementBasis& basis, int subsystem) {
    SubsystemView vw = view_of(s, subsystem);
    if (static_cast<std::size_t>(basis.dim) != vw.d)
        throw std::invalid_argument("basis dimension does not match subsystem");
    std::vector<double> probs(basis.vectors.size(), 0.0);
    std::vector<cplx> coeff;
    for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
        project(s, vw, basis.vectors[k], coeff);
        double p = 0.0;
        for (const cplx& c : coeff) p += std::norm(c);
        probs[k] = p;
    }
    return probs;
}

MeasureResult measure(const StateVector& s, const MeasurementBasis& basis,
                      int subsystem, std::mt19937_64& rng) {
    SubsystemView vw = view_of(s, subsystem);
    std::vector<double> probs = born_probabilities(s, basis, subsystem);
    double total = 0.0;
    for (double p : probs) total += p;
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("basis does not span the subsystem on this state");

    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t pick = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < 1e-15) continue;  // zero-probability branch never returned
        acc += probs[k];
        if (u < acc) {
            pick = k;
            break;
        }
    }
    if (pick == probs.size()) {  // numerical tail: pick last nonzero branch
        for (std::size_t k = probs.size(); k-- > 0;)
            if (probs[k] >= 1e-15) {
                pick = k;
                break;
            }
    }

    std::vector<cplx> coeff;
    project(s, vw, basis.vectors[pick], coeff);
    const double inv = 1.0 / std::sqrt(probs[pick]);
    StateVector out;
    out.dims = s.dims;
    out.amps.assign(s.amps.size(), cplx{0.0, 0.0});
    const std::vector<cplx>& vec = basis.vectors[pick];
    for (std::size_t p = 0; p < vw.pre; ++p)
        for (std::size_t j = 0; j < vw.d; ++j) {
            if (vec[j] == cplx{0.0, 0.0}) continue;
            const std::size_t base = (p * vw.d + j) * vw.post;
            for (std::size_t q = 0; q < vw.post; ++q)
                out.amps[base + q] = coeff[p * vw.post + q] * vec[j] * inv;
        }
    return MeasureResult{pick, basis.labels[pick], probs[pick], std::move(out)};
}

}  // namespace pp84::qmath
