#include "pltk/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pltk {

namespace {

std::string cell_loc(const char* what, int n, Index i) {
    return std::string(what) + "_" + std::to_string(n) + "[" + std::to_string(i) + "]";
}

std::string entry_loc(const char* what, int n, Index r, Index c) {
    return std::string(what) + "_" + std::to_string(n) + "(" + std::to_string(r) + "," +
           std::to_string(c) + ")";
}

template <class Entry>
void check_filtrations(const BasicFilteredComplex<Entry>& fc, ValidationReport& report) {
    for (int n = 0; n <= fc.max_dim(); ++n) {
        const auto& f = fc.filtration(n);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!std::isfinite(f[i])) {
                report.add("finite", cell_loc("F", n, static_cast<Index>(i)),
                           "filtration value is not finite");
                continue;
            }
            if (i > 0 && std::isfinite(f[i - 1]) && f[i] < f[i - 1]) {
                report.add("sorted", cell_loc("F", n, static_cast<Index>(i)),
                           "filtration decreases from " + std::to_string(f[i - 1]) + " to " +
                               std::to_string(f[i]));
            }
        }
    }
}

template <class Entry>
void check_closure(const BasicFilteredComplex<Entry>& fc, ValidationReport& report) {
    for (int n = 1; n <= fc.max_dim(); ++n) {
        const auto& b = fc.boundary(n);
        const auto& faces = fc.filtration(n - 1);
        const auto& cells = fc.filtration(n);
        for (Index c = 0; c < b.outerSize(); ++c) {
            for (typename BasicFilteredComplex<Entry>::Matrix::InnerIterator it(b, c); it; ++it) {
                if (it.value() == Entry(0)) continue;
                if (faces[it.row()] > cells[c]) {
                    report.add("closure", entry_loc("B", n, it.row(), c),
                               "face enters at " + std::to_string(faces[it.row()]) +
                                   " after its coface at " + std::to_string(cells[c]));
                }
            }
        }
    }
}

double max_abs(const RealSparse& m) {
    return m.nonZeros() == 0 ? 0.0 : m.coeffs().cwiseAbs().maxCoeff();
}

}  // namespace

template <class Entry>
BasicFilteredComplex<Entry>::BasicFilteredComplex(std::vector<Matrix> boundaries,
                                                  std::vector<std::vector<Filtration>> filtrations)
    : boundaries_(std::move(boundaries)), filtrations_(std::move(filtrations)) {
    if (filtrations_.size() != boundaries_.size() + 1) {
        throw std::invalid_argument("expected " + std::to_string(boundaries_.size() + 1) +
                                    " filtration lists, got " +
                                    std::to_string(filtrations_.size()));
    }
    for (std::size_t n = 1; n <= boundaries_.size(); ++n) {
        auto& b = boundaries_[n - 1];
        const auto rows = static_cast<Index>(filtrations_[n - 1].size());
        const auto cols = static_cast<Index>(filtrations_[n].size());
        if (b.rows() != rows || b.cols() != cols) {
            throw std::invalid_argument("B_" + std::to_string(n) + " is " +
                                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                        ", expected " + std::to_string(rows) + "x" +
                                        std::to_string(cols));
        }
        b.makeCompressed();
    }
}

template <class Entry>
void BasicFilteredComplex<Entry>::check_dim(int n) const {
    if (n < 0 || n > max_dim()) {
        throw std::out_of_range("dimension " + std::to_string(n) + " outside [0, " +
                                std::to_string(max_dim()) + "]");
    }
}

template <class Entry>
Index BasicFilteredComplex<Entry>::cell_count(int n) const {
    check_dim(n);
    return static_cast<Index>(filtrations_[n].size());
}

template <class Entry>
const typename BasicFilteredComplex<Entry>::Matrix& BasicFilteredComplex<Entry>::boundary(int n) const {
    if (n < 1 || n > max_dim()) {
        throw std::out_of_range("boundary dimension " + std::to_string(n) + " outside [1, " +
                                std::to_string(max_dim()) + "]");
    }
    return boundaries_[n - 1];
}

template <class Entry>
const std::vector<Filtration>& BasicFilteredComplex<Entry>::filtration(int n) const {
    check_dim(n);
    return filtrations_[n];
}

template <class Entry>
Index BasicFilteredComplex<Entry>::count_at(int n, Filtration a) const {
    const auto& f = filtration(n);
    return static_cast<Index>(std::upper_bound(f.begin(), f.end(), a) - f.begin());
}

template <class Entry>
typename BasicFilteredComplex<Entry>::Matrix BasicFilteredComplex<Entry>::boundary_at(int n, Filtration a) const {
    const auto& b = boundary(n);
    const Index rows = count_at(n - 1, a);
    const Index cols = count_at(n, a);
    if (rows == b.rows() && cols == b.cols()) return b;
    Matrix block = b.block(0, 0, rows, cols);
    block.makeCompressed();
    return block;
}

template <class Entry>
std::vector<Filtration> BasicFilteredComplex<Entry>::filtration_grid(std::optional<int> n) const {
    std::vector<Filtration> values;
    if (n) {
        values = filtration(*n);
    } else {
        for (const auto& f : filtrations_) values.insert(values.end(), f.begin(), f.end());
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

template class BasicFilteredComplex<int>;
template class BasicFilteredComplex<double>;

ValidationReport validate(const FilteredComplex& fc, bool strict_simplicial) {
    ValidationReport report;
    check_filtrations(fc, report);
    check_closure(fc, report);

    using Wide = Eigen::SparseMatrix<long long>;
    for (int n = 1; n < fc.max_dim(); ++n) {
        const Wide lhs = fc.boundary(n).cast<long long>();
        const Wide rhs = fc.boundary(n + 1).cast<long long>();
        const Wide prod = lhs * rhs;
        for (Index c = 0; c < prod.outerSize(); ++c) {
            for (Wide::InnerIterator it(prod, c); it; ++it) {
                if (it.value() != 0) {
                    report.add("chain", entry_loc("B*B", n, it.row(), c),
                               "B_" + std::to_string(n) + " * B_" + std::to_string(n + 1) +
                                   " has entry " + std::to_string(it.value()));
                }
            }
        }
    }

    if (strict_simplicial) {
        for (int n = 1; n <= fc.max_dim(); ++n) {
            const auto& b = fc.boundary(n);
            for (Index c = 0; c < b.outerSize(); ++c) {
                Index nnz = 0;
                for (SignMatrix::InnerIterator it(b, c); it; ++it) {
                    if (it.value() == 0) continue;
                    ++nnz;
                    if (it.value() != 1 && it.value() != -1) {
                        report.add("sign", entry_loc("B", n, it.row(), c),
                                   "entry " + std::to_string(it.value()) + " is not +-1");
                    }
                }
                if (nnz != n + 1) {
                    report.add("simplicial", cell_loc("B", n, c),
                               "column has " + std::to_string(nnz) + " faces, expected " +
                                   std::to_string(n + 1));
                }
            }
        }
    }
    return report;
}

ValidationReport validate(const RealFilteredComplex& fc, double chain_tol) {
    ValidationReport report;
    check_filtrations(fc, report);
    check_closure(fc, report);

    for (int n = 1; n < fc.max_dim(); ++n) {
        const auto& lhs = fc.boundary(n);
        const auto& rhs = fc.boundary(n + 1);
        const RealSparse prod = lhs * rhs;
        const double scale = 1.0 + max_abs(lhs) * max_abs(rhs);
        for (Index c = 0; c < prod.outerSize(); ++c) {
            for (RealSparse::InnerIterator it(prod, c); it; ++it) {
                if (std::abs(it.value()) > chain_tol * scale) {
                    report.add("chain", entry_loc("B*B", n, it.row(), c),
                               "B_" + std::to_string(n) + " * B_" + std::to_string(n + 1) +
                                   " has entry " + std::to_string(it.value()));
                }
            }
        }
    }
    return report;
}

}  // namespace pltk
