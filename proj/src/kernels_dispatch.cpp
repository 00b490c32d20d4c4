#include <cstdlib>
#include <string>

#include "holofisher/kernels.hpp"

namespace holofisher::kernels {

#if defined(HOLOFISHER_HAVE_AVX2)
const Backend* avx2_backend_impl();  // kernels_avx2.cpp
#endif

const Backend* avx2_backend() {
#if defined(HOLOFISHER_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_backend_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Backend& active_backend() {
  static const Backend* picked = [] {
    if (const char* force = std::getenv("HOLOFISHER_KERNEL")) {
      const std::string want = force;
      if (want == "scalar") return &scalar_backend();
      if (want == "avx2" && avx2_backend()) return avx2_backend();
    }
    if (const Backend* v = avx2_backend()) return v;
    return &scalar_backend();
  }();
  return *picked;
}

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> v{&scalar_backend()};
  if (const Backend* a = avx2_backend()) v.push_back(a);
  return v;
}

}  // namespace holofisher::kernels
