#include "otfslab/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace otfslab::kern {

const Table& scalar_table();  // kernels_scalar.cpp
const Table* avx2_table();    // kernels_avx2.cpp (nullptr when not built in)

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend pick_backend() {
    if (const char* env = std::getenv("OTFSLAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (supported(Backend::avx2)) return Backend::avx2;
            std::fprintf(stderr, "otfslab: OTFSLAB_KERNELS=avx2 but AVX2 is unavailable, "
                                 "falling back to scalar\n");
            return Backend::scalar;
        }
        std::fprintf(stderr, "otfslab: ignoring unknown OTFSLAB_KERNELS=%s\n", env);
    }
    return supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

}  // namespace

bool supported(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return avx2_table() != nullptr && cpu_has_avx2();
    }
    return false;
}

const Table& table(Backend b) {
    switch (b) {
        case Backend::scalar: return scalar_table();
        case Backend::avx2:
            if (supported(Backend::avx2)) return *avx2_table();
            throw std::runtime_error("avx2 kernels unavailable on this machine");
    }
    throw std::runtime_error("unknown kernel backend");
}

Backend active_backend() {
    static const Backend b = pick_backend();
    return b;
}

const Table& active() {
    static const Table& t = table(active_backend());
    return t;
}

}  // namespace otfslab::kern
