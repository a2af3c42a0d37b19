#include "wz/kernels.hpp"

#include <atomic>

namespace wz::kernels {

void axpy_scalar(uint64_t* acc, const uint32_t* row, uint32_t s, size_t n) {
  const uint64_t s64 = s;
  for (size_t k = 0; k < n; ++k) acc[k] += s64 * row[k];
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {
std::atomic<AxpyFn> g_active{nullptr};

AxpyFn pick_auto() { return avx2_supported() ? axpy_avx2 : axpy_scalar; }
}  // namespace

bool select(Choice c) {
  switch (c) {
    case Choice::Auto: g_active.store(pick_auto()); return true;
    case Choice::Scalar: g_active.store(axpy_scalar); return true;
    case Choice::Avx2:
      if (!avx2_supported()) return false;
      g_active.store(axpy_avx2);
      return true;
  }
  return false;
}

AxpyFn active() {
  AxpyFn f = g_active.load(std::memory_order_relaxed);
  if (!f) {
    f = pick_auto();
    g_active.store(f);
  }
  return f;
}

std::string active_name() { return active() == axpy_avx2 ? "avx2" : "scalar"; }

}  // namespace wz::kernels
