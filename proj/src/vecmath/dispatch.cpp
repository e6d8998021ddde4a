#include <cstdlib>
#include <string_view>

#include "palsgd/kernels.hpp"

namespace palsgd::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("PALSGD_ISA")) {
    const std::string_view want(env);
    if (want == "avx2" && avx2_kernels()) return *avx2_kernels();
    if (want == "neon" && neon_kernels()) return *neon_kernels();
    return scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace palsgd::kernels
