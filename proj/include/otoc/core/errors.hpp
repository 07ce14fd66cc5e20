#pragma once

#include <cstddef>
#include <stdexcept>

namespace otoc {

// Problem size would exceed the configured dense-dimension cap.
struct dimension_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature, truncation or eigensolver failure.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request outside what an engine supports (e.g. a non-commuting chain in the
// path-sum engine).
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hard cap on the total dense Hilbert-space dimension. Guards against an
// accidental exponential blowup; desk-scale problems stay far below it.
inline constexpr std::size_t default_dim_cap = 4096;

} // namespace otoc
