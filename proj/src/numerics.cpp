#include "chainwalk/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chainwalk/errors.hpp"

namespace chainwalk {

ComplexMatrix::ComplexMatrix(std::size_t r, std::size_t c, std::initializer_list<cdouble> entries)
    : rows(r), cols(c), data(entries) {
    if (data.size() != r * c) {
        throw DimensionError("initializer list does not match matrix shape");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }

ComplexMatrix identity2() { return ComplexMatrix::identity(2); }

ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }

ComplexMatrix pauli_y() {
    return ComplexMatrix(2, 2, {0.0, cdouble(0.0, -1.0), cdouble(0.0, 1.0), 0.0});
}

ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols != b.rows) {
        throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols) +
                             " vs " + std::to_string(b.rows) + ")");
    }
    ComplexMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const cdouble aij = a(i, j);
            if (aij == cdouble{}) continue;
            for (std::size_t r = 0; r < b.rows; ++r)
                for (std::size_t c = 0; c < b.cols; ++c)
                    out(i * b.rows + r, j * b.cols + c) = aij * b(r, c);
        }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix &m) {
    ComplexMatrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("add: shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

ComplexMatrix scale(cdouble factor, const ComplexMatrix &m) {
    ComplexMatrix out = m;
    for (auto &x : out.data) x *= factor;
    return out;
}

void add_in_place(ComplexMatrix &acc, const ComplexMatrix &m, cdouble factor) {
    if (acc.rows != m.rows || acc.cols != m.cols) throw DimensionError("add_in_place: shape mismatch");
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += factor * m.data[i];
}

ComplexVector mat_vec(const ComplexMatrix &m, const ComplexVector &v) {
    if (m.cols != v.size()) throw DimensionError("mat_vec: shape mismatch");
    ComplexVector out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        cdouble s{};
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

cdouble det2(const ComplexMatrix &m) {
    if (m.rows != 2 || m.cols != 2) throw DimensionError("det2 expects a 2x2 matrix");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

double max_abs(const ComplexMatrix &m) {
    double best = 0.0;
    for (const auto &x : m.data) best = std::max(best, std::abs(x));
    return best;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("max_abs_diff: shape mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        best = std::max(best, std::abs(a.data[i] - b.data[i]));
    return best;
}

double max_abs(const ComplexVector &v) {
    double best = 0.0;
    for (const auto &x : v) best = std::max(best, std::abs(x));
    return best;
}

double max_abs_diff(const ComplexVector &a, const ComplexVector &b) {
    if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

double norm(const ComplexVector &v) {
    double s = 0.0;
    for (const auto &x : v) s += std::norm(x);
    return std::sqrt(s);
}

bool is_normalized(const ComplexVector &v, double tol) { return std::abs(norm(v) - 1.0) <= tol; }

bool is_hermitian(const ComplexMatrix &m, double tol) {
    if (!m.square()) return false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i; j < m.cols; ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

bool is_unitary(const ComplexMatrix &m, double tol) {
    if (!m.square()) return false;
    return max_abs_diff(matmul(dagger(m), m), ComplexMatrix::identity(m.rows)) <= tol;
}

ComplexMatrix hermitian_exp(const ComplexMatrix &h, double t) {
    if (!h.square()) throw DimensionError("hermitian_exp: matrix must be square");
    if (h.rows > (1u << 14)) {
        throw ScaleError("hermitian_exp: dimension " + std::to_string(h.rows) +
                         " exceeds the desk-scale cap 2^14");
    }
    if (!is_hermitian(h, 1e-10)) throw NotHermitianError("hermitian_exp: input is not Hermitian");

    using EMat = Eigen::MatrixXcd;
    EMat eh(h.rows, h.cols);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j) eh(i, j) = h(i, j);
    Eigen::SelfAdjointEigenSolver<EMat> solver(eh);
    if (solver.info() != Eigen::Success) throw Error("hermitian_exp: eigendecomposition failed");

    const auto &vals = solver.eigenvalues();
    const EMat &vecs = solver.eigenvectors();
    EMat phases = EMat::Zero(h.rows, h.cols);
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        phases(k, k) = std::exp(cdouble(0.0, -vals(k) * t));
    }
    EMat result = vecs * phases * vecs.adjoint();

    ComplexMatrix out(h.rows, h.cols);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j) out(i, j) = result(i, j);
    return out;
}

namespace {

PhaseMatch phase_compare(const cdouble *a, const cdouble *b, std::size_t n, double tol) {
    std::size_t ref = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(b[i]);
        if (mag > best) {
            best = mag;
            ref = i;
        }
    }
    PhaseMatch out;
    if (best == 0.0) {
        // all-zero reference: equal only when a is zero too
        double amax = 0.0;
        for (std::size_t i = 0; i < n; ++i) amax = std::max(amax, std::abs(a[i]));
        out.deviation = amax;
        out.equal = amax <= tol;
        return out;
    }
    const cdouble ratio = a[ref] / b[ref];
    const double mag = std::abs(ratio);
    if (mag == 0.0) {
        out.phase = 1.0;
    } else {
        out.phase = ratio / mag;
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(a[i] - out.phase * b[i]));
    out.deviation = dev;
    out.equal = dev <= tol;
    return out;
}

}  // namespace

PhaseMatch equal_up_to_global_phase(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw DimensionError("equal_up_to_global_phase: shape mismatch");
    }
    return phase_compare(a.data.data(), b.data.data(), a.data.size(), tol);
}

PhaseMatch equal_up_to_global_phase(const ComplexVector &a, const ComplexVector &b, double tol) {
    if (a.size() != b.size()) throw DimensionError("equal_up_to_global_phase: length mismatch");
    return phase_compare(a.data(), b.data(), a.size(), tol);
}

}  // namespace chainwalk
