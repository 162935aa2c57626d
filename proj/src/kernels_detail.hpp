#pragma once

#include <cstddef>

// Internal: ISA-specific kernel entry points, defined in kernels_<isa>.cpp.
namespace gfc::kern::detail {

#if defined(GFC_HAVE_AVX2_KERNELS)
double dot_avx2(const double* a, const double* b, std::size_t n);
double dot_rev_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
#endif

} // namespace gfc::kern::detail
