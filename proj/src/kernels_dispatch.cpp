#include "cryocav/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "cryocav/errors.hpp"

namespace cryocav::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* resolve(const char* name) {
    if (std::strcmp(name, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(name, "avx2") == 0) {
        const KernelTable* t = avx2_kernels();
        if (t == nullptr || !cpu_has_avx2_fma()) {
            throw InvalidInput("avx2 kernels are not available on this build/machine");
        }
        return t;
    }
    if (std::strcmp(name, "auto") == 0) {
        const KernelTable* t = avx2_kernels();
        if (t != nullptr && cpu_has_avx2_fma()) return t;
        return &scalar_kernels();
    }
    throw InvalidInput(std::string("unknown kernel backend '") + name + "'");
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active_kernels() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        const char* env = std::getenv("CRYOCAV_KERNELS");
        t = resolve(env != nullptr ? env : "auto");
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void force_backend(const char* name) {
    g_active.store(resolve(name), std::memory_order_release);
}

}  // namespace cryocav::kernels
