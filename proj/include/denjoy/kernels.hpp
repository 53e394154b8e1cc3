#pragma once

#include <cstddef>
#include <vector>

namespace denjoy::kernels {

enum class Backend { scalar, avx2, neon };

/// Batch math kernels. All backends produce bit-identical outputs; the SIMD
/// variants only change throughput. Domains: exp on [-700, 700] (clamped),
/// log/pow require x > 0 (NaN otherwise), bump is supported on (0, 1).
struct Ops {
    const char* name;
    void (*exp)(const double* x, double* out, std::size_t n);
    void (*log)(const double* x, double* out, std::size_t n);
    void (*pow)(const double* x, double y, double* out, std::size_t n);
    void (*cospi)(const double* x, double* out, std::size_t n);
    void (*bump)(const double* R, const double* t, double* out, std::size_t n);
    void (*bump_fixed)(double R, const double* t, double* out, std::size_t n);
};

/// Active backend, selected once: DENJOY_KERNELS=scalar|avx2|neon|auto, with
/// auto picking the widest lane the CPU supports.
const Ops& active();
Backend active_backend();

/// Force a backend (tests). Returns false if unavailable on this machine.
bool set_backend(Backend);

std::vector<Backend> supported_backends();
const char* backend_name(Backend);

// Single-point entry points, identical to the batch results.
double exp1(double x);
double log1(double x);
double pow1(double x, double y);
double cospi1(double x);
double bump1(double R, double t);

}  // namespace denjoy::kernels
