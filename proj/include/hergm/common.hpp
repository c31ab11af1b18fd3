#ifndef HERGM_COMMON_HPP
#define HERGM_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hergm {

// Error taxonomy; the CLI maps these onto exit codes.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

inline double logistic(double u) {
    // stable for large |u|
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    double e = std::exp(u);
    return e / (1.0 + e);
}

// Minimal dense row-major matrix. Everything in the EM kernels is either
// n-by-K or K-by-K, so no fancy algebra is needed here.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return d_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return d_[static_cast<size_t>(r) * cols_ + c]; }

    double* row(int r) { return d_.data() + static_cast<size_t>(r) * cols_; }
    const double* row(int r) const { return d_.data() + static_cast<size_t>(r) * cols_; }

    void fill(double v) { std::fill(d_.begin(), d_.end(), v); }

    const std::vector<double>& data() const { return d_; }
    std::vector<double>& data() { return d_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

// C = A * B^T where A is n x K and B is K2 x K; result n x K2.
inline Mat mul_abt(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (int r = 0; r < b.rows(); ++r) {
            const double* br = b.row(r);
            double acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += ai[k] * br[k];
            ci[r] = acc;
        }
    }
    return c;
}

namespace detail {
inline int& thread_cap_ref() {
    static int cap = 0;  // 0 = hardware concurrency
    return cap;
}
}  // namespace detail

inline void set_thread_cap(int n) { detail::thread_cap_ref() = n; }

inline int worker_count() {
    int cap = detail::thread_cap_ref();
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (cap > 0 && cap < hw) return cap;
    return hw;
}

// Chunked parallel for over [begin, end). The body receives (worker, lo, hi)
// and must only write worker-local state.
template <typename F>
void parallel_chunks(int64_t begin, int64_t end, F&& body) {
    int nw = worker_count();
    int64_t total = end - begin;
    if (total <= 0) return;
    if (nw <= 1 || total < 1024) {
        body(0, begin, end);
        return;
    }
    if (nw > total) nw = static_cast<int>(total);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    int64_t chunk = (total + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        int64_t lo = begin + w * chunk;
        int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, w, lo, hi] { body(w, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hergm

#endif
