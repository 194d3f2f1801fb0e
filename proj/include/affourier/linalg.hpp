// Small dense linear algebra for runtime-dimensional matrices (d >= 2).
// Matrices here are tiny (d is 2 or 3 in practice), so everything is
// written for low constant overhead rather than asymptotics.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace affourier {

using Vec = std::vector<double>;

struct Matrix {
    int dim = 0;
    std::vector<double> a;  // row-major, dim*dim entries

    Matrix() = default;
    explicit Matrix(int d) : dim(d), a(static_cast<size_t>(d) * d, 0.0) {}
    Matrix(int d, std::vector<double> entries) : dim(d), a(std::move(entries)) {
        if (a.size() != static_cast<size_t>(d) * d)
            throw std::invalid_argument("Matrix: entry count does not match dimension");
    }

    static Matrix identity(int d) {
        Matrix m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }

    double& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }

    bool finite() const {
        for (double v : a)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Matrix&) const = default;
};

// 2x2 rotation [[cos, -sin], [sin, cos]].
inline Matrix rotation2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Matrix(2, {c, -s, s, c});
}

inline Matrix diagonal(const Vec& d) {
    Matrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim; ++i) m.at(i, i) = d[static_cast<size_t>(i)];
    return m;
}

inline Matrix scaled(const Matrix& m, double c) {
    Matrix r = m;
    for (double& v : r.a) v *= c;
    return r;
}

inline Matrix transpose(const Matrix& m) {
    Matrix r(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    const int d = x.dim;
    Matrix r(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const double xik = x.at(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < d; ++j) r.at(i, j) += xik * y.at(k, j);
        }
    return r;
}

// out = M x. Unrolled for d = 2, 3; out must not alias x.
inline void matvec_into(const Matrix& m, const double* x, double* out) {
    const int d = m.dim;
    const double* a = m.a.data();
    if (d == 2) {
        out[0] = a[0] * x[0] + a[1] * x[1];
        out[1] = a[2] * x[0] + a[3] * x[1];
        return;
    }
    if (d == 3) {
        out[0] = a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
        out[1] = a[3] * x[0] + a[4] * x[1] + a[5] * x[2];
        out[2] = a[6] * x[0] + a[7] * x[1] + a[8] * x[2];
        return;
    }
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += a[static_cast<size_t>(i) * d + j] * x[j];
        out[i] = s;
    }
}

// out = M^T x.
inline void tmatvec_into(const Matrix& m, const double* x, double* out) {
    const int d = m.dim;
    const double* a = m.a.data();
    if (d == 2) {
        out[0] = a[0] * x[0] + a[2] * x[1];
        out[1] = a[1] * x[0] + a[3] * x[1];
        return;
    }
    if (d == 3) {
        out[0] = a[0] * x[0] + a[3] * x[1] + a[6] * x[2];
        out[1] = a[1] * x[0] + a[4] * x[1] + a[7] * x[2];
        out[2] = a[2] * x[0] + a[5] * x[1] + a[8] * x[2];
        return;
    }
    for (int i = 0; i < d; ++i) out[i] = 0.0;
    for (int j = 0; j < d; ++j) {
        const double xj = x[j];
        for (int i = 0; i < d; ++i) out[i] += a[static_cast<size_t>(j) * d + i] * xj;
    }
}

inline Vec matvec(const Matrix& m, const Vec& x) {
    Vec r(static_cast<size_t>(m.dim));
    matvec_into(m, x.data(), r.data());
    return r;
}

inline Vec tmatvec(const Matrix& m, const Vec& x) {
    Vec r(static_cast<size_t>(m.dim));
    tmatvec_into(m, x.data(), r.data());
    return r;
}

inline double dot(const double* x, const double* y, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * y[i];
    return s;
}

inline double dot(const Vec& x, const Vec& y) {
    return dot(x.data(), y.data(), static_cast<int>(x.size()));
}

inline double norm2(const double* x, int d) { return std::sqrt(dot(x, x, d)); }
inline double norm2(const Vec& x) { return norm2(x.data(), static_cast<int>(x.size())); }

inline void normalize_inplace(double* x, int d) {
    const double n = norm2(x, d);
    for (int i = 0; i < d; ++i) x[i] /= n;
}

inline Vec normalized(Vec x) {
    normalize_inplace(x.data(), static_cast<int>(x.size()));
    return x;
}

inline Vec vsub(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

inline Vec vadd(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline Vec vscale(const Vec& x, double c) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
    return r;
}

namespace detail {

// Largest eigenvalue of the symmetric 3x3 matrix G, by the trigonometric
// closed form for symmetric eigenvalues.
inline double sym3_eigmax(const Matrix& g) {
    const double p1 = g.at(0, 1) * g.at(0, 1) + g.at(0, 2) * g.at(0, 2) +
                      g.at(1, 2) * g.at(1, 2);
    const double q = (g.at(0, 0) + g.at(1, 1) + g.at(2, 2)) / 3.0;
    if (p1 == 0.0) return std::max({g.at(0, 0), g.at(1, 1), g.at(2, 2)});
    const double d00 = g.at(0, 0) - q, d11 = g.at(1, 1) - q, d22 = g.at(2, 2) - q;
    const double p2 = d00 * d00 + d11 * d11 + d22 * d22 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Matrix b(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b.at(i, j) = (g.at(i, j) - (i == j ? q : 0.0)) / p;
    const double detb = b.at(0, 0) * (b.at(1, 1) * b.at(2, 2) - b.at(1, 2) * b.at(2, 1)) -
                        b.at(0, 1) * (b.at(1, 0) * b.at(2, 2) - b.at(1, 2) * b.at(2, 0)) +
                        b.at(0, 2) * (b.at(1, 0) * b.at(2, 1) - b.at(1, 1) * b.at(2, 0));
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

inline Matrix gram(const Matrix& m) {
    const int d = m.dim;
    Matrix g(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += m.at(k, i) * m.at(k, j);
            g.at(i, j) = s;
            g.at(j, i) = s;
        }
    return g;
}

}  // namespace detail

// Operator norm = largest singular value. Closed form for d = 2, 3 via the
// Gram matrix; power iteration (tolerance 1e-13) for larger d.
inline double op_norm(const Matrix& m) {
    const int d = m.dim;
    if (d == 1) return std::abs(m.a[0]);
    const Matrix g = detail::gram(m);
    if (d == 2) {
        const double t = g.at(0, 0) + g.at(1, 1);
        const double det = g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0);
        const double disc = std::max(t * t - 4.0 * det, 0.0);
        return std::sqrt((t + std::sqrt(disc)) / 2.0);
    }
    if (d == 3) return std::sqrt(std::max(detail::sym3_eigmax(g), 0.0));

    Vec v(static_cast<size_t>(d), 1.0);
    v[0] += 0.25;  // break symmetry
    normalize_inplace(v.data(), d);
    Vec gv(static_cast<size_t>(d));
    double lambda = 0.0;
    for (int it = 0; it < 4000; ++it) {
        matvec_into(g, v.data(), gv.data());
        const double nl = dot(v, gv);
        const double nn = norm2(gv);
        if (nn == 0.0) return 0.0;
        for (int i = 0; i < d; ++i) v[i] = gv[i] / nn;
        if (it > 2 && std::abs(nl - lambda) <= 1e-13 * std::max(1.0, std::abs(nl))) {
            lambda = nl;
            break;
        }
        lambda = nl;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

// Smallest singular value, from the Gram matrix (d = 2, 3) or via
// op_norm of the inverse for larger d.
inline double det(const Matrix& m);
inline Matrix inverse(const Matrix& m);

inline double smallest_singular(const Matrix& m) {
    const int d = m.dim;
    const Matrix g = detail::gram(m);
    if (d == 2) {
        const double t = g.at(0, 0) + g.at(1, 1);
        const double dt = g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0);
        const double disc = std::max(t * t - 4.0 * dt, 0.0);
        return std::sqrt(std::max((t - std::sqrt(disc)) / 2.0, 0.0));
    }
    const double n = op_norm(inverse(m));
    return n > 0.0 ? 1.0 / n : 0.0;
}

namespace detail {

// LU with partial pivoting; returns false when (numerically) singular.
inline bool lu_decompose(Matrix& m, std::vector<int>& piv, int& sign) {
    const int d = m.dim;
    piv.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) piv[static_cast<size_t>(i)] = i;
    sign = 1;
    for (int c = 0; c < d; ++c) {
        int best = c;
        double bv = std::abs(m.at(c, c));
        for (int r = c + 1; r < d; ++r)
            if (std::abs(m.at(r, c)) > bv) {
                bv = std::abs(m.at(r, c));
                best = r;
            }
        if (bv == 0.0) return false;
        if (best != c) {
            for (int j = 0; j < d; ++j) std::swap(m.at(c, j), m.at(best, j));
            std::swap(piv[static_cast<size_t>(c)], piv[static_cast<size_t>(best)]);
            sign = -sign;
        }
        for (int r = c + 1; r < d; ++r) {
            const double f = m.at(r, c) / m.at(c, c);
            m.at(r, c) = f;
            for (int j = c + 1; j < d; ++j) m.at(r, j) -= f * m.at(c, j);
        }
    }
    return true;
}

}  // namespace detail

inline double det(const Matrix& m) {
    const int d = m.dim;
    if (d == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    if (d == 3)
        return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
               m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
               m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    Matrix lu = m;
    std::vector<int> piv;
    int sign = 1;
    if (!detail::lu_decompose(lu, piv, sign)) return 0.0;
    double p = sign;
    for (int i = 0; i < d; ++i) p *= lu.at(i, i);
    return p;
}

// Solves M x = b; throws on singular M.
inline Vec solve(const Matrix& m, const Vec& b) {
    const int d = m.dim;
    Matrix lu = m;
    std::vector<int> piv;
    int sign = 1;
    if (!detail::lu_decompose(lu, piv, sign))
        throw std::runtime_error("solve: singular matrix");
    Vec x(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(piv[static_cast<size_t>(i)])];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= lu.at(i, j) * x[static_cast<size_t>(j)];
    for (int i = d - 1; i >= 0; --i) {
        for (int j = i + 1; j < d; ++j) x[static_cast<size_t>(i)] -= lu.at(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= lu.at(i, i);
    }
    return x;
}

inline Matrix inverse(const Matrix& m) {
    const int d = m.dim;
    Matrix inv(d);
    Vec e(static_cast<size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        Vec col = solve(m, e);
        for (int i = 0; i < d; ++i) inv.at(i, j) = col[static_cast<size_t>(i)];
        e[static_cast<size_t>(j)] = 0.0;
    }
    return inv;
}

// Eigenvalues of a real 2x2 matrix.
inline std::pair<std::complex<double>, std::complex<double>> eig2(const Matrix& m) {
    const double tr = m.at(0, 0) + m.at(1, 1);
    const double dt = det(m);
    const double disc = tr * tr - 4.0 * dt;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {{(tr + s) / 2.0, 0.0}, {(tr - s) / 2.0, 0.0}};
    }
    const double s = std::sqrt(-disc);
    return {{tr / 2.0, s / 2.0}, {tr / 2.0, -s / 2.0}};
}

// Eigenvalues of a real 3x3 matrix via Cardano on the characteristic cubic.
inline std::array<std::complex<double>, 3> eig3(const Matrix& m) {
    const double tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
    const double m00 = m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1);
    const double m11 = m.at(0, 0) * m.at(2, 2) - m.at(0, 2) * m.at(2, 0);
    const double m22 = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    const double c1 = m00 + m11 + m22;
    const double c0 = det(m);
    // lambda^3 - tr lambda^2 + c1 lambda - c0 = 0; depress with lambda = y + tr/3.
    const double p = c1 - tr * tr / 3.0;
    const double q = -2.0 * tr * tr * tr / 27.0 + tr * c1 / 3.0 - c0;
    const double shift = tr / 3.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    std::array<std::complex<double>, 3> out;
    if (disc >= 0.0) {
        // three real roots, trigonometric form
        const double a = std::sqrt(std::max(-p / 3.0, 0.0));
        if (a == 0.0) {
            out = {std::complex<double>(shift), std::complex<double>(shift),
                   std::complex<double>(shift)};
            return out;
        }
        const double arg = std::clamp(3.0 * q / (2.0 * p * a), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            out[static_cast<size_t>(k)] =
                shift + 2.0 * a * std::cos(phi - 2.0 * M_PI * k / 3.0);
        return out;
    }
    // one real root + conjugate pair, via Cardano radicals
    const double inner = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
    const double s = std::sqrt(inner);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    const double y1 = u + v;
    const double re = -y1 / 2.0;
    const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
    out[0] = std::complex<double>(y1 + shift, 0.0);
    out[1] = std::complex<double>(re + shift, im);
    out[2] = std::complex<double>(re + shift, -im);
    return out;
}

}  // namespace affourier
