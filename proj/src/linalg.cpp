#include "cvqkd/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cvqkd {

SmallMatrix::SmallMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    assert(rows <= kMaxDim && cols <= kMaxDim);
}

SmallMatrix SmallMatrix::identity(std::size_t n) {
    SmallMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmallMatrix SmallMatrix::transposed() const {
    SmallMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

SmallMatrix SmallMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
    assert(r0 + nr <= rows_ && c0 + nc <= cols_);
    SmallMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void SmallMatrix::set_block(std::size_t r0, std::size_t c0, const SmallMatrix& b) {
    assert(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_);
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

double SmallMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double SmallMatrix::determinant() const {
    assert(rows_ == cols_);
    SmallMatrix lu = *this;
    const std::size_t n = rows_;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
            det = -det;
        }
        det *= lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            for (std::size_t c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
        }
    }
    return det;
}

double SmallMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    return worst;
}

double SmallMatrix::max_abs() const {
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m = std::max(m, std::abs((*this)(r, c)));
    return m;
}

SmallMatrix& SmallMatrix::operator+=(const SmallMatrix& rhs) {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] += rhs.data_[i];
    return *this;
}

SmallMatrix& SmallMatrix::operator-=(const SmallMatrix& rhs) {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] -= rhs.data_[i];
    return *this;
}

SmallMatrix& SmallMatrix::operator*=(double s) {
    for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] *= s;
    return *this;
}

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    assert(a.cols() == b.rows());
    SmallMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double av = a(r, k);
            if (av == 0.0) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += av * b(k, c);
        }
    return out;
}

SmallMatrix direct_sum(const SmallMatrix& a, const SmallMatrix& b) {
    SmallMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    return out;
}

SmallMatrix permute_modes(const SmallMatrix& m, std::span<const std::size_t> order) {
    const std::size_t n = order.size();
    assert(m.rows() == 2 * n && m.cols() == 2 * n);
    SmallMatrix out(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    out(2 * i + a, 2 * j + b) = m(2 * order[i] + a, 2 * order[j] + b);
    return out;
}

SmallMatrix symplectic_form(std::size_t n_modes) {
    SmallMatrix omega(2 * n_modes, 2 * n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

std::vector<double> characteristic_polynomial(const SmallMatrix& a) {
    assert(a.rows() == a.cols());
    const std::size_t m = a.rows();
    std::vector<double> coeffs(m + 1, 0.0);
    coeffs[0] = 1.0;
    SmallMatrix work = SmallMatrix::identity(m);
    for (std::size_t k = 1; k <= m; ++k) {
        work = a * work;
        const double c = -work.trace() / static_cast<double>(k);
        coeffs[k] = c;
        for (std::size_t i = 0; i < m; ++i) work(i, i) += c;
    }
    return coeffs;
}

namespace {

double eval_poly(std::span<const double> c, double x) {
    double v = 0.0;
    for (double ci : c) v = v * x + ci;
    return v;
}

double eval_dpoly(std::span<const double> c, double x) {
    const std::size_t deg = c.size() - 1;
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) v = v * x + c[i] * static_cast<double>(deg - i);
    return v;
}

double polish(std::span<const double> c, double x) {
    for (int it = 0; it < 3; ++it) {
        const double f = eval_poly(c, x);
        const double df = eval_dpoly(c, x);
        if (df == 0.0) break;
        const double step = f / df;
        // Newton is only a local refinement here; near-multiple roots make
        // f/df unreliable, so reject large excursions.
        if (!std::isfinite(step) || std::abs(step) > 0.1 * (1.0 + std::abs(x))) break;
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return x;
}

// Roots of x^2 + bx + c, real by assumption (tiny negative discriminants clamp).
std::array<double, 2> quadratic_roots(double b, double c) {
    double disc = b * b - 4.0 * c;
    const double scale = std::max({1.0, b * b, std::abs(c)});
    if (disc < 0.0) {
        if (disc < -1e-9 * scale)
            throw std::domain_error("quadratic discriminant negative: complex roots");
        disc = 0.0;
    }
    const double s = std::sqrt(disc);
    // Citardauq for the smaller-magnitude root
    const double q = -0.5 * (b + (b >= 0.0 ? s : -s));
    const double r0 = q;
    const double r1 = q != 0.0 ? c / q : -b - q;
    return {std::max(r0, r1), std::min(r0, r1)};
}

// Roots of x^3 + a x^2 + b x + c, all real (trigonometric form).
std::array<double, 3> cubic_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    if (p >= 0.0) {
        // Degenerate (p ~ 0 for a near-triple root); p > 0 would mean one real
        // root only, which violates the all-real assumption beyond tolerance.
        const double scale = std::max(1.0, a * a);
        if (p > 1e-9 * scale) throw std::domain_error("cubic has complex roots");
        const double t = std::cbrt(-q);
        return {shift + t, shift + t, shift + t};
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::array<double, 3> roots;
    for (int k = 0; k < 3; ++k)
        roots[k] = shift + m * std::cos(theta - 2.0 * M_PI * k / 3.0);
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

// Roots of x^4 + a x^3 + b x^2 + c x + d, all real (Ferrari via resolvent cubic).
std::array<double, 4> quartic_roots(double a, double b, double c, double d) {
    // Depressed quartic y^4 + p y^2 + q y + r, x = y - a/4.
    const double a2 = a * a;
    const double p = b - 3.0 * a2 / 8.0;
    const double q = c - a * b / 2.0 + a2 * a / 8.0;
    const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
    const double shift = -a / 4.0;
    const double s1p = 1.0 + std::abs(shift);
    const double s2 = s1p * s1p;

    // Quadruple root: the depressed polynomial collapses to y^4.
    if (std::abs(p) < 1e-10 * s2 && std::abs(q) < 1e-10 * s2 * s1p &&
        std::abs(r) < 1e-10 * s2 * s2) {
        return {shift, shift, shift, shift};
    }

    if (std::abs(q) < 1e-12 * (1.0 + std::abs(p) + std::abs(r))) {
        // Biquadratic
        const auto z = quadratic_roots(p, r);
        std::array<double, 4> roots;
        for (int i = 0; i < 2; ++i) {
            const double zi = std::max(z[i], 0.0);
            roots[2 * i] = shift + std::sqrt(zi);
            roots[2 * i + 1] = shift - std::sqrt(zi);
        }
        std::sort(roots.begin(), roots.end(), std::greater<>());
        return roots;
    }

    // Resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0 has a positive root
    // when the quartic factors over the reals.
    const auto zs = cubic_roots(2.0 * p, p * p - 4.0 * r, -q * q);
    const double z = std::max(zs[0], 0.0);
    const double w = std::sqrt(z);
    // y^4 + p y^2 + q y + r = (y^2 + w y + s0)(y^2 - w y + s1)
    const double s0 = (z != 0.0) ? 0.5 * (p + z - q / w) : 0.5 * p;
    const double s1 = (z != 0.0) ? 0.5 * (p + z + q / w) : 0.5 * p;
    const auto r0 = quadratic_roots(w, s0);
    const auto r1 = quadratic_roots(-w, s1);
    std::array<double, 4> roots{shift + r0[0], shift + r0[1], shift + r1[0], shift + r1[1]};
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

}  // namespace

std::vector<double> real_roots(std::span<const double> monic) {
    if (monic.empty() || monic[0] != 1.0)
        throw std::invalid_argument("expected a monic coefficient list");
    const std::size_t deg = monic.size() - 1;
    std::vector<double> roots;
    switch (deg) {
        case 0:
            return roots;
        case 1:
            roots = {-monic[1]};
            break;
        case 2: {
            const auto r = quadratic_roots(monic[1], monic[2]);
            roots = {r[0], r[1]};
            break;
        }
        case 3: {
            const auto r = cubic_roots(monic[1], monic[2], monic[3]);
            roots = {r[0], r[1], r[2]};
            break;
        }
        case 4: {
            const auto r = quartic_roots(monic[1], monic[2], monic[3], monic[4]);
            roots = {r[0], r[1], r[2], r[3]};
            break;
        }
        default:
            throw std::invalid_argument("real_roots supports degree <= 4");
    }
    for (double& x : roots) x = polish(monic, x);
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

}  // namespace cvqkd
