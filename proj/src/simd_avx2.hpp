#pragma once

#include "bec/simd.hpp"

namespace bec::simd::detail {

#if defined(BEC_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

} // namespace bec::simd::detail
