#include "oovcat/kernels.hpp"

namespace oovcat::kernels {

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double sum(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double*, const double*, std::size_t);
double sum(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
}  // namespace neon
#endif

static Backend resolve() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return {avx2::dot, avx2::sum, avx2::axpy, avx2::scale, "avx2"};
    }
#endif
#if defined(__aarch64__)
    return {neon::dot, neon::sum, neon::axpy, neon::scale, "neon"};
#endif
    return {scalar::dot, scalar::sum, scalar::axpy, scalar::scale, "scalar"};
}

const Backend& active() {
    static const Backend backend = resolve();
    return backend;
}

std::string_view active_name() { return active().name; }

}  // namespace oovcat::kernels
