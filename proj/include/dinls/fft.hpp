#pragma once

/*
 * Thin complex-to-complex FFTW wrapper for 1-, 2- and 3-D cubes of size n^dim.
 *
 * Plans are created once per shape with FFTW_ESTIMATE | FFTW_UNALIGNED, which
 * keeps plan selection deterministic (no runtime measurement) and lets the
 * same plan execute on any caller buffer. The FFTW planner is not thread-safe,
 * so construction is serialized; execution is safe concurrently on distinct
 * buffers. backward() applies the 1/n^dim normalization, so
 * backward(forward(a)) == a up to round-off.
 */

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dinls {

class Fft {
public:
    Fft(int dim, int n) : dim_(dim), n_(n) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("Fft: dim must be 1, 2 or 3");
        if (n < 2) throw std::invalid_argument("Fft: n must be at least 2");
        total_ = 1;
        for (int d = 0; d < dim; ++d) total_ *= static_cast<std::size_t>(n);
        std::vector<std::complex<double>> scratch(total_);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        int shape[3] = {n, n, n};
        std::lock_guard<std::mutex> lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft(dim, shape, buf, buf, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft(dim, shape, buf, buf, FFTW_BACKWARD, flags);
        if (!fwd_ || !bwd_) throw std::runtime_error("Fft: plan creation failed");
    }

    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::size_t size() const { return total_; }

    /** In-place unnormalized forward DFT. */
    void forward(std::vector<std::complex<double>>& a) const {
        check(a);
        auto* buf = reinterpret_cast<fftw_complex*>(a.data());
        fftw_execute_dft(fwd_, buf, buf);
    }

    /** In-place inverse DFT including the 1/n^dim factor. */
    void backward(std::vector<std::complex<double>>& a) const {
        check(a);
        auto* buf = reinterpret_cast<fftw_complex*>(a.data());
        fftw_execute_dft(bwd_, buf, buf);
        const double scale = 1.0 / static_cast<double>(total_);
        for (auto& z : a) z *= scale;
    }

private:
    void check(const std::vector<std::complex<double>>& a) const {
        if (a.size() != total_) throw std::invalid_argument("Fft: buffer size mismatch");
    }

    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    int dim_;
    int n_;
    std::size_t total_ = 0;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

}  // namespace dinls
