#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rg/diagram.hpp"

namespace rg {

using Complex = std::complex<double>;

/// Dense complex matrix of shape 2^n_outputs x 2^n_inputs, row-major.
/// Row index bits follow the outputs list (leftmost output = most
/// significant bit); column bits follow the inputs list likewise.
struct TensorMap {
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    std::vector<Complex> entries;

    std::size_t rows() const { return std::size_t{1} << n_outputs; }
    std::size_t cols() const { return std::size_t{1} << n_inputs; }
    Complex& at(std::size_t r, std::size_t c) { return entries[r * cols() + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return entries[r * cols() + c]; }
};

struct ScalarEquivalence {
    bool equivalent = false;
    Complex scalar{1.0, 0.0};  ///< a ~ scalar * b when equivalent
    double max_residual = 0.0;
};

struct EvalOptions {
    /// Maximum amplitudes in any intermediate tensor.
    std::size_t rank_cap = std::size_t{1} << 14;
};

/// Generator matrix for a single vertex. Z-spider(a) has entry 1 at
/// (0..0,0..0) and e^{ia} at (1..1,1..1); the X-spider is its H-conjugate
/// on every leg; Hadamard is the usual 2x2 matrix (1->1 only).
TensorMap generator_tensor(const VertexKind& kind, std::size_t n_in, std::size_t n_out);

/// Contracts the whole diagram. Throws ResourceError when an intermediate
/// tensor would exceed opts.rank_cap amplitudes.
TensorMap evaluate(const Diagram& d, const EvalOptions& opts = {});

/// Tests a ~ s*b. The scalar is taken against b's largest-magnitude entry;
/// two all-zero tensors are equivalent with scalar 1.
ScalarEquivalence equiv_up_to_scalar(const TensorMap& a, const TensorMap& b, double tol);

}  // namespace rg
