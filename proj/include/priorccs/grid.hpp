// SPDX-License-Identifier: Apache-2.0
//
// priorccs: prior-aware 2D convolutional compressive sensing for mmWave beam alignment
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PRIORCCS_GRID_HPP
#define PRIORCCS_GRID_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace priorccs
{
using cplx = std::complex<double>;

/// Raised when grid or vector shapes do not agree.
class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Beamspace direction index. Row-major: k = r * N + c, rows are elevation, columns azimuth.
struct FlatIndex
{
    std::size_t value = 0;
    friend bool operator==(FlatIndex, FlatIndex) = default;
};

/// 2D circulant shift, both components reduced modulo N.
struct ShiftCoord
{
    std::size_t r = 0;
    std::size_t c = 0;
    friend bool operator==(ShiftCoord, ShiftCoord) = default;
};

inline FlatIndex to_flat(std::size_t r, std::size_t c, std::size_t n) { return FlatIndex{r * n + c}; }
inline ShiftCoord from_flat(FlatIndex k, std::size_t n) { return ShiftCoord{k.value / n, k.value % n}; }

/// Dense complex matrix stored row-major.
class ComplexGrid
{
  public:
    ComplexGrid() = default;

    ComplexGrid(std::size_t rows, std::size_t cols, cplx fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
        if (rows == 0 || cols == 0)
            throw DimensionError("ComplexGrid: dimensions must be positive");
    }

    explicit ComplexGrid(std::size_t n, cplx fill = {}) : ComplexGrid(n, n, fill) {}

    // Square grid with a real fill; without it (n, 1.0) would bind to (rows, cols).
    template <std::floating_point F> ComplexGrid(std::size_t n, F fill) : ComplexGrid(n, n, cplx(fill)) {}

    static ComplexGrid delta(std::size_t n, std::size_t r, std::size_t c, cplx value = 1.0)
    {
        ComplexGrid g(n);
        g(r % n, c % n) = value;
        return g;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    /// Side length of a square grid; throws for rectangular grids.
    std::size_t side() const
    {
        if (!is_square())
            throw DimensionError("expected a square grid, got " + std::to_string(rows_) + "x" + std::to_string(cols_));
        return rows_;
    }

    cplx &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    cplx &operator[](std::size_t k) noexcept { return data_[k]; }
    const cplx &operator[](std::size_t k) const noexcept { return data_[k]; }

    std::span<cplx> flat() noexcept { return data_; }
    std::span<const cplx> flat() const noexcept { return data_; }

    double frobenius_norm_sq() const noexcept
    {
        double s = 0.0;
        for (const auto &v : data_)
            s += std::norm(v);
        return s;
    }
    double frobenius_norm() const noexcept { return std::sqrt(frobenius_norm_sq()); }

    bool all_finite() const noexcept
    {
        for (const auto &v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                return false;
        return true;
    }

    ComplexGrid &operator+=(const ComplexGrid &o)
    {
        require_same_shape(*this, o, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }
    ComplexGrid &operator-=(const ComplexGrid &o)
    {
        require_same_shape(*this, o, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }
    ComplexGrid &operator*=(cplx s) noexcept
    {
        for (auto &v : data_)
            v *= s;
        return *this;
    }

    friend ComplexGrid operator+(ComplexGrid a, const ComplexGrid &b) { return a += b; }
    friend ComplexGrid operator-(ComplexGrid a, const ComplexGrid &b) { return a -= b; }
    friend ComplexGrid operator*(ComplexGrid a, cplx s) { return a *= s; }
    friend ComplexGrid operator*(cplx s, ComplexGrid a) { return a *= s; }

    static void require_same_shape(const ComplexGrid &a, const ComplexGrid &b, const char *what)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows_) + "x" +
                                 std::to_string(a.cols_) + " vs " + std::to_string(b.rows_) + "x" +
                                 std::to_string(b.cols_));
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Entrywise product.
inline ComplexGrid hadamard(const ComplexGrid &a, const ComplexGrid &b)
{
    ComplexGrid::require_same_shape(a, b, "hadamard");
    ComplexGrid out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
    return out;
}

inline ComplexGrid conj(const ComplexGrid &a)
{
    ComplexGrid out = a;
    for (auto &v : out.flat())
        v = std::conj(v);
    return out;
}

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexGrid &a, const ComplexGrid &b)
{
    ComplexGrid::require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Frobenius inner product <a, b> = sum a * conj(b).
inline cplx inner(const ComplexGrid &a, const ComplexGrid &b)
{
    ComplexGrid::require_same_shape(a, b, "inner");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * std::conj(b[i]);
    return s;
}

/// Row-major vectorization, consistent with FlatIndex.
inline std::vector<cplx> vec(const ComplexGrid &a) { return {a.flat().begin(), a.flat().end()}; }

inline ComplexGrid unvec(std::span<const cplx> v, std::size_t n)
{
    if (v.size() != n * n)
        throw DimensionError("unvec: expected " + std::to_string(n * n) + " entries, got " + std::to_string(v.size()));
    ComplexGrid g(n);
    for (std::size_t i = 0; i < v.size(); ++i)
        g[i] = v[i];
    return g;
}

/// Index of the largest |v_k|; ties go to the lowest index.
inline FlatIndex argmax_magnitude(std::span<const cplx> v)
{
    if (v.empty())
        throw DimensionError("argmax_magnitude: empty input");
    std::size_t best = 0;
    double best_mag = std::norm(v[0]);
    for (std::size_t k = 1; k < v.size(); ++k)
    {
        const double m = std::norm(v[k]);
        if (m > best_mag)
        {
            best = k;
            best_mag = m;
        }
    }
    return FlatIndex{best};
}

/// Phase of z, with the phase of an exact zero defined as 0.
inline double safe_arg(cplx z) noexcept { return (z == cplx{}) ? 0.0 : std::arg(z); }

} // namespace priorccs

#endif
