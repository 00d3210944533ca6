#pragma once

// Exact complex linear algebra for pure states on small composite Hilbert
// spaces (total dimension <= 64). States are immutable values; every
// operation returns a fresh state.

#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace pp84::qmath {

using cplx = std::complex<double>;

inline constexpr double kTol = 1e-9;

struct StateVector {
    std::vector<cplx> amps;
    std::vector<int> dims;  // subsystem dimensions; product == amps.size()

    std::size_t dim() const { return amps.size(); }
    double norm() const;

    // Throws std::invalid_argument on shape mismatch or non-unit norm.
    void validate() const;

    static StateVector basis_state(std::vector<int> dims, std::size_t index);
    static StateVector from_amplitudes(std::vector<int> dims, std::vector<cplx> amps);
};

// Inner-product-preserving map from dim_in to dim_out >= dim_in, stored dense
// row-major (dim_out rows, dim_in columns).
struct Isometry {
    std::vector<cplx> m;
    std::vector<int> dims_in;
    std::vector<int> dims_out;

    std::size_t dim_in() const;
    std::size_t dim_out() const;
    cplx at(std::size_t row, std::size_t col) const { return m[row * dim_in() + col]; }

    // Checks column orthonormality within kTol; throws on violation.
    void validate() const;
};

struct MeasurementBasis {
    int dim = 0;
    std::vector<std::vector<cplx>> vectors;  // orthonormal, spanning
    std::vector<std::string> labels;

    void validate() const;

    static MeasurementBasis z();  // {|0>, |1>}
    static MeasurementBasis x();  // {|+>, |->}
};

struct MeasureResult {
    std::size_t index = 0;  // index of the sampled basis vector
    std::string label;
    double probability = 0.0;
    StateVector state;  // renormalized post-measurement state
};

StateVector tensor(const StateVector& a, const StateVector& b);

// Applies `v` to the subsystems listed in `targets` (ascending indices into
// s.dims). The first targets.size() output subsystems replace the targets in
// place; any extra output subsystems are appended at the end of the state.
StateVector apply_isometry(const Isometry& v, const StateVector& s,
                           const std::vector<int>& targets);

cplx inner(const StateVector& a, const StateVector& b);

// Born probabilities for each basis vector on one subsystem (no sampling).
std::vector<double> born_probabilities(const StateVector& s,
                                       const MeasurementBasis& basis, int subsystem);

MeasureResult measure(const StateVector& s, const MeasurementBasis& basis,
                      int subsystem, std::mt19937_64& rng);

}  // namespace pp84::qmath
