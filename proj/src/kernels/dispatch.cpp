#include <stdexcept>

#include "psqam/kernels/kernels.hpp"

namespace psqam::kernels {

namespace {

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend& current() {
    static Backend b = detect();
    return b;
}

}  // namespace

Backend active_backend() { return current(); }

bool backend_supported(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw std::runtime_error(std::string("backend not supported on this cpu: ") +
                                 backend_name(b));
    current() = b;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

void ask_llrs(const double* y, std::size_t n, const AskDemapParams& params, double* out) {
    if (current() == Backend::avx2)
        detail::ask_llrs_avx2(y, n, params, out);
    else
        detail::ask_llrs_scalar(y, n, params, out);
}

void mi_terms(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
              const MiTermParams& params, double* terms) {
    if (current() == Backend::avx2)
        detail::mi_terms_avx2(yi, yq, tx, n, params, terms);
    else
        detail::mi_terms_scalar(yi, yq, tx, n, params, terms);
}

}  // namespace psqam::kernels
