#pragma once

// Sparse ladder operators on a truncated two-mode Fock space.
//
// Tensor ordering is fixed project-wide: mode 1 is the left (slow) factor, so
// the basis state |n1, n2> sits at index n1 * d2 + n2.

#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <vector>

#include "qvdp/errors.hpp"

namespace qvdp {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<Complex, int>;

enum class Mode : int { one = 1, two = 2 };

constexpr Mode other(Mode m) noexcept { return m == Mode::one ? Mode::two : Mode::one; }
constexpr int to_int(Mode m) noexcept { return static_cast<int>(m); }

inline Mode mode_from_int(int m) {
    if (m == 1) return Mode::one;
    if (m == 2) return Mode::two;
    throw InvalidArgument("mode index must be 1 or 2, got " + std::to_string(m));
}

struct TruncationSpec {
    static constexpr int default_dimension_cap = 4096;

    int n_max_1 = 6;
    int n_max_2 = 6;

    int dim(Mode m) const noexcept { return (m == Mode::one ? n_max_1 : n_max_2) + 1; }
    int n_max(Mode m) const noexcept { return m == Mode::one ? n_max_1 : n_max_2; }
    int dim() const noexcept { return dim(Mode::one) * dim(Mode::two); }

    int index(int n1, int n2) const noexcept { return n1 * dim(Mode::two) + n2; }
    int level(int index, Mode m) const noexcept {
        return m == Mode::one ? index / dim(Mode::two) : index % dim(Mode::two);
    }

    void validate(int cap = default_dimension_cap) const {
        if (n_max_1 < 2 || n_max_2 < 2) {
            throw InvalidArgument("truncation needs n_max >= 2 per mode (got " +
                                  std::to_string(n_max_1) + ", " + std::to_string(n_max_2) + ")");
        }
        if (static_cast<long long>(n_max_1 + 1) * (n_max_2 + 1) > cap) {
            throw InvalidArgument("Hilbert dimension exceeds cap of " + std::to_string(cap));
        }
    }

    friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

inline TruncationSpec uniform_truncation(int n_max) { return {n_max, n_max}; }

inline SparseMatrix identity(int dim) {
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return id;
}

// <n-1|a|n> = sqrt(n) on the superdiagonal.
inline SparseMatrix annihilation(int n_max) {
    if (n_max < 1) throw InvalidArgument("annihilation: n_max must be >= 1");
    const int dim = n_max + 1;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        entries.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    }
    SparseMatrix a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

inline SparseMatrix creation(int n_max) { return SparseMatrix(annihilation(n_max).adjoint()); }

inline SparseMatrix number(int n_max) {
    if (n_max < 0) throw InvalidArgument("number: n_max must be >= 0");
    std::vector<Triplet> entries;
    for (int k = 1; k <= n_max; ++k) entries.emplace_back(k, k, Complex(k, 0.0));
    SparseMatrix n(n_max + 1, n_max + 1);
    n.setFromTriplets(entries.begin(), entries.end());
    return n;
}

inline SparseMatrix kron(const SparseMatrix& left, const SparseMatrix& right) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(left.nonZeros()) * right.nonZeros());
    for (int lc = 0; lc < left.outerSize(); ++lc) {
        for (SparseMatrix::InnerIterator l(left, lc); l; ++l) {
            for (int rc = 0; rc < right.outerSize(); ++rc) {
                for (SparseMatrix::InnerIterator r(right, rc); r; ++r) {
                    entries.emplace_back(static_cast<int>(l.row() * right.rows() + r.row()),
                                         static_cast<int>(l.col() * right.cols() + r.col()),
                                         l.value() * r.value());
                }
            }
        }
    }
    SparseMatrix out(left.rows() * right.rows(), left.cols() * right.cols());
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

// Lifts a single-mode operator to the two-mode space (op (x) I or I (x) op).
inline SparseMatrix embed(const SparseMatrix& op, Mode mode, const TruncationSpec& trunc) {
    const int d_mode = trunc.dim(mode);
    if (op.rows() != d_mode || op.cols() != d_mode) {
        throw DimensionMismatch("embed: operator is " + std::to_string(op.rows()) + "x" +
                                std::to_string(op.cols()) + ", mode " + std::to_string(to_int(mode)) +
                                " has dimension " + std::to_string(d_mode));
    }
    const SparseMatrix id_other = identity(trunc.dim(other(mode)));
    return mode == Mode::one ? kron(op, id_other) : kron(id_other, op);
}

inline SparseMatrix annihilation(Mode mode, const TruncationSpec& trunc) {
    return embed(annihilation(trunc.n_max(mode)), mode, trunc);
}

inline SparseMatrix number(Mode mode, const TruncationSpec& trunc) {
    return embed(number(trunc.n_max(mode)), mode, trunc);
}

// Jump operator a1 - a2 of the shared reservoir.
inline SparseMatrix collective_jump(const TruncationSpec& trunc) {
    trunc.validate();
    SparseMatrix c = annihilation(Mode::one, trunc) - annihilation(Mode::two, trunc);
    c.prune(Complex(0.0, 0.0));
    return c;
}

} // namespace qvdp
