#include "rigidlab/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace rigidlab {

ScalarVec ScalarVec::zeros(std::size_t len, const FieldSpec& f) {
    ScalarVec v;
    if (f.is_prime())
        v.u.assign(len, 0);
    else
        v.q.assign(len, mpq_class(0));
    return v;
}

ScalarVec ScalarVec::from_scalars(const std::vector<Scalar>& vals, const FieldSpec& f) {
    ScalarVec v = zeros(vals.size(), f);
    for (std::size_t i = 0; i < vals.size(); ++i) v.set(i, vals[i], f);
    return v;
}

Scalar ScalarVec::at(std::size_t i, const FieldSpec& f) const {
    return f.is_prime() ? Scalar(u[i]) : Scalar(q[i]);
}

void ScalarVec::set(std::size_t i, const Scalar& s, const FieldSpec& f) {
    if (f.is_prime())
        u[i] = s.residue();
    else
        q[i] = s.rational();
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, FieldSpec field)
    : field_(field), rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
    if (field.is_prime())
        u_.assign(rows * cols, 0);
    else
        q_.assign(rows * cols, mpq_class(0));
}

Scalar DenseMatrix::at(std::size_t r, std::size_t c) const {
    std::size_t i = r * cols_ + c;
    return field_.is_prime() ? Scalar(u_[i]) : Scalar(q_[i]);
}

void DenseMatrix::set(std::size_t r, std::size_t c, const Scalar& s) {
    std::size_t i = r * cols_ + c;
    if (field_.is_prime())
        u_[i] = s.residue();
    else
        q_[i] = s.rational();
}

bool DenseMatrix::operator==(const DenseMatrix& o) const {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && u_ == o.u_ && q_ == o.q_;
}

std::string DenseMatrix::to_csv() const {
    std::ostringstream out;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c) out << ',';
            out << at(r, c).str();
        }
        out << '\n';
    }
    return out.str();
}

DenseMatrix DenseMatrix::from_csv(const std::string& text, const FieldSpec& field) {
    std::vector<std::vector<Scalar>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Scalar> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(field.parse_scalar(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidArgument("empty CSV matrix");
    std::size_t cols = rows[0].size();
    DenseMatrix m(rows.size(), cols, field);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw InvalidArgument("ragged CSV matrix");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

namespace {

std::size_t rank_prime(const DenseMatrix& m) {
    const FieldSpec f = m.field();
    std::vector<std::uint64_t> a = m.u();
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t piv = 0;
    for (std::size_t c = 0; c < C && piv < R; ++c) {
        std::size_t sel = piv;
        while (sel < R && a[sel * C + c] == 0) ++sel;
        if (sel == R) continue;
        if (sel != piv)
            for (std::size_t j = c; j < C; ++j) std::swap(a[sel * C + j], a[piv * C + j]);
        const std::uint64_t inv = f.rinv(a[piv * C + c]);
        for (std::size_t i = piv + 1; i < R; ++i) {
            const std::uint64_t v = a[i * C + c];
            if (v == 0) continue;
            const std::uint64_t factor = f.rmul(v, inv);
            a[i * C + c] = 0;
            for (std::size_t j = c + 1; j < C; ++j) {
                const std::uint64_t t = f.rmul(factor, a[piv * C + j]);
                a[i * C + j] = f.rsub(a[i * C + j], t);
            }
        }
        ++piv;
    }
    return piv;
}

// Bareiss fraction-free elimination. Rows are first scaled to integers
// (row scaling does not change rank); the exact division keeps every
// intermediate equal to a minor of the scaled matrix.
std::size_t rank_rational(const DenseMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<mpz_class> a(R * C);
    for (std::size_t r = 0; r < R; ++r) {
        mpz_class lcm = 1;
        for (std::size_t c = 0; c < C; ++c) {
            const mpq_class& v = m.q()[r * C + c];
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
        }
        for (std::size_t c = 0; c < C; ++c) {
            const mpq_class& v = m.q()[r * C + c];
            a[r * C + c] = v.get_num() * (lcm / v.get_den());
        }
    }
    std::size_t piv = 0;
    mpz_class prev = 1;
    for (std::size_t c = 0; c < C && piv < R; ++c) {
        std::size_t sel = piv;
        while (sel < R && a[sel * C + c] == 0) ++sel;
        if (sel == R) continue;
        if (sel != piv)
            for (std::size_t j = 0; j < C; ++j) std::swap(a[sel * C + j], a[piv * C + j]);
        for (std::size_t i = piv + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) {
                mpz_class t = a[piv * C + c] * a[i * C + j] - a[i * C + c] * a[piv * C + j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i * C + j] = t;
            }
            a[i * C + c] = 0;
        }
        prev = a[piv * C + c];
        ++piv;
    }
    return piv;
}

}  // namespace

std::size_t rank(const DenseMatrix& m) {
    return m.field().is_prime() ? rank_prime(m) : rank_rational(m);
}

std::uint64_t hamming_distance(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.field() != b.field()) throw InvalidArgument("hamming_distance: field mismatch");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("hamming_distance: shape mismatch");
    std::uint64_t d = 0;
    if (a.field().is_prime()) {
        for (std::size_t i = 0; i < a.u().size(); ++i) d += a.u()[i] != b.u()[i];
    } else {
        for (std::size_t i = 0; i < a.q().size(); ++i) d += a.q()[i] != b.q()[i];
    }
    return d;
}

FactoredMatrix::FactoredMatrix(std::size_t rows, std::size_t cols, FieldSpec field)
    : field_(field), rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
}

void FactoredMatrix::add_term(ScalarVec left, ScalarVec right) {
    if (left.size(field_) != rows_ || right.size(field_) != cols_)
        throw InvalidArgument("factored term dimension mismatch");
    left_.push_back(std::move(left));
    right_.push_back(std::move(right));
}

void FactoredMatrix::add_term(const std::vector<Scalar>& left, const std::vector<Scalar>& right) {
    add_term(ScalarVec::from_scalars(left, field_), ScalarVec::from_scalars(right, field_));
}

Scalar FactoredMatrix::entry(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw InvalidArgument("factored entry out of range");
    if (field_.is_prime()) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < left_.size(); ++k)
            acc = field_.radd(acc, field_.rmul(left_[k].u[r], right_[k].u[c]));
        return Scalar(acc);
    }
    mpq_class acc = 0;
    for (std::size_t k = 0; k < left_.size(); ++k) acc += left_[k].q[r] * right_[k].q[c];
    return Scalar(acc);
}

std::vector<Scalar> FactoredMatrix::column(std::size_t c) const {
    if (c >= cols_) throw InvalidArgument("column index out of range");
    std::vector<Scalar> col(rows_, field_.zero());
    if (field_.is_prime()) {
        std::vector<std::uint64_t> acc(rows_, 0);
        for (std::size_t k = 0; k < left_.size(); ++k) {
            const std::uint64_t rv = right_[k].u[c];
            if (rv == 0) continue;
            for (std::size_t i = 0; i < rows_; ++i)
                acc[i] = field_.radd(acc[i], field_.rmul(left_[k].u[i], rv));
        }
        for (std::size_t i = 0; i < rows_; ++i) col[i] = Scalar(acc[i]);
    } else {
        std::vector<mpq_class> acc(rows_, mpq_class(0));
        for (std::size_t k = 0; k < left_.size(); ++k) {
            const mpq_class& rv = right_[k].q[c];
            if (rv == 0) continue;
            for (std::size_t i = 0; i < rows_; ++i) acc[i] += left_[k].q[i] * rv;
        }
        for (std::size_t i = 0; i < rows_; ++i) col[i] = Scalar(acc[i]);
    }
    return col;
}

std::vector<Scalar> FactoredMatrix::row(std::size_t r) const {
    if (r >= rows_) throw InvalidArgument("row index out of range");
    std::vector<Scalar> row(cols_, field_.zero());
    if (field_.is_prime()) {
        std::vector<std::uint64_t> acc(cols_, 0);
        for (std::size_t k = 0; k < left_.size(); ++k) {
            const std::uint64_t lv = left_[k].u[r];
            if (lv == 0) continue;
            for (std::size_t j = 0; j < cols_; ++j)
                acc[j] = field_.radd(acc[j], field_.rmul(lv, right_[k].u[j]));
        }
        for (std::size_t j = 0; j < cols_; ++j) row[j] = Scalar(acc[j]);
    } else {
        std::vector<mpq_class> acc(cols_, mpq_class(0));
        for (std::size_t k = 0; k < left_.size(); ++k) {
            const mpq_class& lv = left_[k].q[r];
            if (lv == 0) continue;
            for (std::size_t j = 0; j < cols_; ++j) acc[j] += lv * right_[k].q[j];
        }
        for (std::size_t j = 0; j < cols_; ++j) row[j] = Scalar(acc[j]);
    }
    return row;
}

DenseMatrix materialize(const FactoredMatrix& f, const Budget& budget) {
    budget.charge(static_cast<std::uint64_t>(f.rows()) * f.cols(), "materialize");
    DenseMatrix m(f.rows(), f.cols(), f.field());
    const FieldSpec& fld = f.field();
    const std::size_t R = f.rows(), C = f.cols();
    if (fld.is_prime()) {
        auto& a = m.u();
        for (std::size_t k = 0; k < f.term_count(); ++k) {
            const auto& l = f.left(k).u;
            const auto& r = f.right(k).u;
            for (std::size_t i = 0; i < R; ++i) {
                const std::uint64_t lv = l[i];
                if (lv == 0) continue;
                std::uint64_t* row = a.data() + i * C;
                for (std::size_t j = 0; j < C; ++j) row[j] = fld.radd(row[j], fld.rmul(lv, r[j]));
            }
        }
    } else {
        auto& a = m.q();
        for (std::size_t k = 0; k < f.term_count(); ++k) {
            const auto& l = f.left(k).q;
            const auto& r = f.right(k).q;
            for (std::size_t i = 0; i < R; ++i) {
                const mpq_class& lv = l[i];
                if (lv == 0) continue;
                for (std::size_t j = 0; j < C; ++j)
                    if (r[j] != 0) a[i * C + j] += lv * r[j];
            }
        }
    }
    return m;
}

FactoredMatrix append_rank_one(const FactoredMatrix& f, const std::vector<Scalar>& left,
                               const std::vector<Scalar>& right) {
    if (left.size() != f.rows() || right.size() != f.cols())
        throw InvalidArgument("append_rank_one: vector dimension mismatch");
    FactoredMatrix g = f;
    g.add_term(left, right);
    return g;
}

}  // namespace rigidlab
