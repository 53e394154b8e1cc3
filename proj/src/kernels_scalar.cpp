#include "denjoy/kernels.hpp"

#include "kernels_detail.hpp"

namespace denjoy::kernels {

namespace {

using namespace detail;

void exp_batch(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = exp_core(x[i]);
}

void log_batch(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = log_core(x[i]);
}

void pow_batch(const double* x, double y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = pow_core(x[i], y);
}

void cospi_batch(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = cospi_core(x[i]);
}

void bump_batch(const double* R, const double* t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = bump_core(R[i], t[i]);
}

void bump_fixed_batch(double R, const double* t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = bump_core(R, t[i]);
}

}  // namespace

const Ops* scalar_ops() {
    static const Ops ops{"scalar",     exp_batch,  log_batch,
                         pow_batch,    cospi_batch, bump_batch,
                         bump_fixed_batch};
    return &ops;
}

}  // namespace denjoy::kernels
