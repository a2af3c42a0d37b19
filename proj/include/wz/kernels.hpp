#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Inner loop of every ring multiplication: acc[k] += s * row[k].
// Inputs are residues below 2^24, so a product fits in 48 bits and the
// accumulator survives 2^16 updates before it has to be reduced.

namespace wz::kernels {

using AxpyFn = void (*)(uint64_t* acc, const uint32_t* row, uint32_t s,
                        size_t n);

void axpy_scalar(uint64_t* acc, const uint32_t* row, uint32_t s, size_t n);
void axpy_avx2(uint64_t* acc, const uint32_t* row, uint32_t s, size_t n);

enum class Choice { Auto, Scalar, Avx2 };

bool avx2_supported();
// Selects the kernel used by ring arithmetic. Auto picks AVX2 when the CPU
// has it. Returns false if the requested variant is unavailable.
bool select(Choice c);
AxpyFn active();
std::string active_name();

// Largest modulus the kernels accept.
constexpr uint64_t kMaxModulus = uint64_t(1) << 24;
// Updates allowed between reductions.
constexpr size_t kMaxPending = size_t(1) << 16;

}  // namespace wz::kernels
