#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace cvqkd {

/// Dense real matrix with fixed 8x8 capacity: enough for the covariance
/// algebra of up to four bosonic modes. Value type, trivially copyable.
class SmallMatrix {
public:
    static constexpr std::size_t kMaxDim = 8;

    SmallMatrix() = default;
    SmallMatrix(std::size_t rows, std::size_t cols);

    static SmallMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    SmallMatrix transposed() const;
    SmallMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const SmallMatrix& b);

    double trace() const;
    /// Determinant by partial-pivot elimination.
    double determinant() const;
    /// max |a_ij - a_ji|.
    double asymmetry() const;
    double max_abs() const;

    SmallMatrix& operator+=(const SmallMatrix& rhs);
    SmallMatrix& operator-=(const SmallMatrix& rhs);
    SmallMatrix& operator*=(double s);

    friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);
    friend SmallMatrix operator+(SmallMatrix a, const SmallMatrix& b) { return a += b; }
    friend SmallMatrix operator-(SmallMatrix a, const SmallMatrix& b) { return a -= b; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::array<double, kMaxDim * kMaxDim> data_{};
};

/// Block-diagonal composition [a 0; 0 b].
SmallMatrix direct_sum(const SmallMatrix& a, const SmallMatrix& b);

/// Reorders the x/p pairs of a 2n x 2n mode matrix: entry i of `order` names
/// the old mode placed at new position i.
SmallMatrix permute_modes(const SmallMatrix& m, std::span<const std::size_t> order);

/// Symplectic form Omega = diag_n([[0,1],[-1,0]]) for n modes.
SmallMatrix symplectic_form(std::size_t n_modes);

/// Monic characteristic polynomial coefficients of a square matrix via the
/// Faddeev-LeVerrier recursion: returns {1, c1, ..., cm} with
/// p(x) = x^m + c1 x^(m-1) + ... + cm.
std::vector<double> characteristic_polynomial(const SmallMatrix& a);

/// All roots of a monic polynomial of degree <= 4 whose roots are known to be
/// real (closed forms plus one Newton polish per root), sorted descending.
/// Throws std::domain_error if a discriminant is negative beyond tolerance.
std::vector<double> real_roots(std::span<const double> monic_coeffs);

}  // namespace cvqkd
