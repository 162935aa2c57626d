#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the quadrature and Monte Carlo code.
// Scalar reference implementations always exist; on x86-64 an AVX2/FMA
// variant is selected at runtime when the CPU supports it. The variants are
// equivalence-tested against each other (see tests/test_kernels.cpp).
namespace gfc::kern {

enum class Isa { scalar, avx2 };

// ISA of the kernels currently dispatched to.
Isa active_isa();

// True if kernels for `isa` are compiled in and runnable on this CPU.
bool isa_available(Isa isa);

// Pin dispatch to one ISA (testing hook). Throws UnsupportedError if the
// requested ISA is unavailable.
void force_isa(Isa isa);

// Reset to the best available ISA.
void reset_isa();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i] * b[n-1-i]  (correlation step of the convolution quadrature)
double dot_rev(const double* a, const double* b, std::size_t n);

// sum_i a[i]
double sum(const double* a, std::size_t n);

} // namespace gfc::kern
