#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qstack/error.hpp"

namespace qstack {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Used for gate matrices and for the
/// full-unitary backend.
class UnitaryMatrix {
  public:
    UnitaryMatrix() = default;

    explicit UnitaryMatrix(std::size_t dim)
        : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

    UnitaryMatrix(std::size_t dim, std::initializer_list<Complex> entries)
        : dim_(dim), data_(entries) {
        if (data_.size() != dim * dim) {
            throw Error("matrix entry count does not match dimension");
        }
    }

    static UnitaryMatrix identity(std::size_t dim) {
        UnitaryMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    Complex &operator()(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    [[nodiscard]] std::span<const Complex> data() const noexcept {
        return data_;
    }
    [[nodiscard]] std::span<Complex> data() noexcept { return data_; }

    [[nodiscard]] UnitaryMatrix adjoint() const {
        UnitaryMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    friend UnitaryMatrix operator*(const UnitaryMatrix &a,
                                   const UnitaryMatrix &b) {
        if (a.dim_ != b.dim_) {
            throw Error("matrix dimension mismatch in product");
        }
        const std::size_t n = a.dim_;
        UnitaryMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend UnitaryMatrix operator*(Complex s, UnitaryMatrix m) {
        for (auto &v : m.data_) {
            v *= s;
        }
        return m;
    }

    /// Kronecker product a ⊗ b; b occupies the low-order index bits.
    friend UnitaryMatrix kron(const UnitaryMatrix &a, const UnitaryMatrix &b) {
        const std::size_t n = a.dim_ * b.dim_;
        UnitaryMatrix out(n);
        for (std::size_t ai = 0; ai < a.dim_; ++ai) {
            for (std::size_t aj = 0; aj < a.dim_; ++aj) {
                for (std::size_t bi = 0; bi < b.dim_; ++bi) {
                    for (std::size_t bj = 0; bj < b.dim_; ++bj) {
                        out(ai * b.dim_ + bi, aj * b.dim_ + bj) =
                            a(ai, aj) * b(bi, bj);
                    }
                }
            }
        }
        return out;
    }

    /// max_ij |a_ij - b_ij|
    [[nodiscard]] double max_abs_diff(const UnitaryMatrix &other) const {
        if (dim_ != other.dim_) {
            throw Error("matrix dimension mismatch");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
        }
        return worst;
    }

    /// max_ij |(U†U - I)_ij|
    [[nodiscard]] double unitarity_error() const {
        return (adjoint() * (*this)).max_abs_diff(identity(dim_));
    }

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Phase-invariant distance 1 - |tr(a† b)| / dim. Zero iff b = e^{iα} a for
/// unitary a, b.
inline double phase_distance(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    if (a.dim() != b.dim()) {
        throw Error("phase_distance: dimension mismatch (" +
                    std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()) + ")");
    }
    if (a.dim() == 0) {
        return 0.0;
    }
    Complex trace{};
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        trace += std::conj(da[i]) * db[i];
    }
    const double d = 1.0 - std::abs(trace) / static_cast<double>(a.dim());
    // rounding can push the trace magnitude a hair above dim
    return std::max(d, 0.0);
}

} // namespace qstack
