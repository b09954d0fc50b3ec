#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels used by the trainers and samplers.
// Scalar reference implementations always exist; on x86 an AVX2 variant
// is selected at runtime when the CPU supports it, on aarch64 a NEON
// variant. The dispatched and scalar paths are equivalence-tested.

namespace oovcat::kernels {

struct Backend {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    const char* name;
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace scalar

// Active backend, resolved once on first use.
const Backend& active();
std::string_view active_name();

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) {
    return active().sum(x.data(), x.size());
}
// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), x.size());
}
inline void scale(double a, std::span<double> x) {
    active().scale(a, x.data(), x.size());
}

// Information-theoretic helpers (base 2). Scalar only: the vectors here
// are short (tag sets, topic mixtures) and the 1e-9 oracle tolerance
// leaves no room for polynomial log approximations.
double entropy_bits(std::span<const double> p);
double kl_bits(std::span<const double> p, std::span<const double> q);

}  // namespace oovcat::kernels
