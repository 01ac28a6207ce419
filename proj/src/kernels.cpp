#include "seqpred/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace seqpred::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_ops_table() != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& select() {
    const char* forced = std::getenv("SEQPRED_KERNELS");
    if (forced != nullptr) {
        if (std::strcmp(forced, "scalar") == 0) return scalar_ops;
        if (std::strcmp(forced, "avx2") == 0 && avx2_available()) return *avx2_ops_table();
    }
    if (avx2_available()) return *avx2_ops_table();
    return scalar_ops;
}

} // namespace

const Ops& active() {
    static const Ops& ops = select();
    return ops;
}

} // namespace seqpred::kernels
