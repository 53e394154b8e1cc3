#include "denjoy/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

#include "kernels_detail.hpp"

namespace denjoy::kernels {

const Ops* scalar_ops();
const Ops* avx2_ops();
const Ops* neon_ops();

namespace {

bool cpu_supports(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__)
            return avx2_ops() != nullptr && __builtin_cpu_supports("avx2") &&
                   __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
            return neon_ops() != nullptr;
    }
    return false;
}

const Ops* ops_for(Backend b) {
    switch (b) {
        case Backend::scalar: return scalar_ops();
        case Backend::avx2: return avx2_ops();
        case Backend::neon: return neon_ops();
    }
    return scalar_ops();
}

Backend auto_backend() {
    if (cpu_supports(Backend::avx2)) return Backend::avx2;
    if (cpu_supports(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Backend initial_backend() {
    const char* env = std::getenv("DENJOY_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_supports(Backend::avx2)) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && cpu_supports(Backend::neon)) return Backend::neon;
    }
    return auto_backend();
}

Backend g_backend = initial_backend();

}  // namespace

const Ops& active() { return *ops_for(g_backend); }

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
    if (!cpu_supports(b)) return false;
    g_backend = b;
    return true;
}

std::vector<Backend> supported_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
        if (cpu_supports(b)) out.push_back(b);
    return out;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

double exp1(double x) { return detail::exp_core(x); }
double log1(double x) { return detail::log_core(x); }
double pow1(double x, double y) { return detail::pow_core(x, y); }
double cospi1(double x) { return detail::cospi_core(x); }
double bump1(double R, double t) { return detail::bump_core(R, t); }

}  // namespace denjoy::kernels
