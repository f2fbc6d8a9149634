#include "feastsvd/sparse.hpp"
#include "feastsvd/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace feast {

namespace {

struct Header {
    bool coordinate = true;
    Field field = Field::Real;
    Symmetry symmetry = Symmetry::General;
    bool skew = false;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

Header parse_header(const std::string& line) {
    std::istringstream in(line);
    std::string banner, object, format, field, sym;
    in >> banner >> object >> format >> field >> sym;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", 1);
    object = lower(object);
    format = lower(format);
    field = lower(field);
    sym = lower(sym);
    if (object != "matrix") throw UnsupportedFormat("object '" + object + "' is not 'matrix'");
    Header h;
    if (format == "coordinate") {
        h.coordinate = true;
    } else if (format == "array") {
        h.coordinate = false;
    } else {
        throw ParseError("unknown format '" + format + "'", 1);
    }
    if (field == "real" || field == "double") h.field = Field::Real;
    else if (field == "complex") h.field = Field::Complex;
    else if (field == "integer") h.field = Field::Integer;
    else if (field == "pattern") h.field = Field::Pattern;
    else throw ParseError("unknown field '" + field + "'", 1);
    if (sym == "general") h.symmetry = Symmetry::General;
    else if (sym == "symmetric") h.symmetry = Symmetry::Symmetric;
    else if (sym == "hermitian") h.symmetry = Symmetry::Hermitian;
    else if (sym == "skew-symmetric") {
        h.symmetry = Symmetry::Symmetric;
        h.skew = true;
    } else {
        throw ParseError("unknown symmetry '" + sym + "'", 1);
    }
    if (h.field == Field::Pattern && !h.coordinate)
        throw ParseError("pattern field requires coordinate format", 1);
    return h;
}

class LineReader {
public:
    explicit LineReader(const std::string& path) : in_(path) {
        if (!in_) throw IoError("cannot open '" + path + "'");
    }
    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++lineno_;
            if (lineno_ == 1) return true;
            auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '%') continue;
            return true;
        }
        return false;
    }
    long lineno() const { return lineno_; }

private:
    std::ifstream in_;
    long lineno_ = 0;
};

double parse_double(std::istringstream& in, long lineno) {
    std::string tok;
    if (!(in >> tok)) throw ParseError("missing value", lineno);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        // from_chars rejects a leading '+'; fall back to strtod.
        char* end = nullptr;
        v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) throw ParseError("bad number '" + tok + "'", lineno);
    }
    return v;
}

long parse_index(std::istringstream& in, long lineno) {
    long v = 0;
    if (!(in >> v)) throw ParseError("missing index", lineno);
    return v;
}

cplx parse_value(std::istringstream& in, Field field, long lineno) {
    switch (field) {
        case Field::Pattern: return cplx(1.0, 0.0);
        case Field::Complex: {
            double re = parse_double(in, lineno);
            double im = parse_double(in, lineno);
            return cplx(re, im);
        }
        default: return cplx(parse_double(in, lineno), 0.0);
    }
}

void write_value(std::FILE* f, const cplx& v, Field field) {
    switch (field) {
        case Field::Pattern: break;
        case Field::Complex: std::fprintf(f, " %.17g %.17g", v.real(), v.imag()); break;
        case Field::Integer: std::fprintf(f, " %lld", static_cast<long long>(v.real())); break;
        default: std::fprintf(f, " %.17g", v.real()); break;
    }
}

const char* field_name(Field field) {
    switch (field) {
        case Field::Complex: return "complex";
        case Field::Integer: return "integer";
        case Field::Pattern: return "pattern";
        default: return "real";
    }
}

}  // namespace

bool SparseMatrix::is_real() const {
    for (int k = 0; k < data.outerSize(); ++k)
        for (SpMat::InnerIterator it(data, k); it; ++it)
            if (it.value().imag() != 0.0) return false;
    return true;
}

SparseMatrix SparseMatrix::from_triplets(Eigen::Index rows, Eigen::Index cols,
                                         const std::vector<Eigen::Triplet<cplx>>& triplets,
                                         Symmetry sym) {
    if (sym != Symmetry::General && rows != cols)
        throw DimensionMismatch("symmetric/hermitian matrix must be square");
    for (const auto& t : triplets) {
        if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
            throw DimensionMismatch("triplet index out of range");
        if (!std::isfinite(t.value().real()) || !std::isfinite(t.value().imag()))
            throw NonFiniteEntry("sparse triplet has a non-finite value");
    }
    SparseMatrix m;
    m.symmetry = sym;
    m.data.resize(rows, cols);
    m.data.setFromTriplets(triplets.begin(), triplets.end());
    m.data.makeCompressed();
    return m;
}

SparseMatrix SparseMatrix::from_dense(const Mat& d) {
    require_finite(d, "SparseMatrix::from_dense");
    std::vector<Eigen::Triplet<cplx>> t;
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            if (d(i, j) != cplx(0.0)) t.emplace_back(i, j, d(i, j));
    return from_triplets(d.rows(), d.cols(), t);
}

Mat SparseMatrix::to_dense() const { return Mat(data); }

SparseMatrix read_matrix_market(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty file", 1);
    Header h = parse_header(line);
    if (!h.coordinate) throw UnsupportedFormat("array-format Matrix Market is not a sparse matrix");
    if (h.symmetry == Symmetry::Hermitian && h.field != Field::Complex) h.symmetry = Symmetry::Symmetric;

    if (!reader.next(line)) throw ParseError("missing size line", reader.lineno());
    long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream in(line);
        if (!(in >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw ParseError("bad size line", reader.lineno());
    }
    if (h.symmetry != Symmetry::General && rows != cols)
        throw ParseError("symmetric matrix must be square", reader.lineno());

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(h.symmetry == Symmetry::General ? nnz : 2 * nnz);
    long seen = 0;
    while (seen < nnz) {
        if (!reader.next(line))
            throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen),
                             reader.lineno());
        std::istringstream in(line);
        long i = parse_index(in, reader.lineno());
        long j = parse_index(in, reader.lineno());
        if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of range", reader.lineno());
        cplx v = parse_value(in, h.field, reader.lineno());
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ParseError("non-finite value", reader.lineno());
        trip.emplace_back(i - 1, j - 1, v);
        if (h.symmetry != Symmetry::General && i != j) {
            cplx mirrored = h.skew ? -v : (h.symmetry == Symmetry::Hermitian ? std::conj(v) : v);
            trip.emplace_back(j - 1, i - 1, mirrored);
        }
        ++seen;
    }
    if (reader.next(line)) throw ParseError("trailing data after the last entry", reader.lineno());
    return SparseMatrix::from_triplets(rows, cols, trip, h.symmetry);
}

void write_matrix_market(const std::string& path, const SparseMatrix& m, Field field) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot write '" + path + "'");
    std::fprintf(f, "%%%%MatrixMarket matrix coordinate %s general\n", field_name(field));
    std::fprintf(f, "%lld %lld %lld\n", static_cast<long long>(m.rows()), static_cast<long long>(m.cols()),
                 static_cast<long long>(m.nnz()));
    for (int k = 0; k < m.data.outerSize(); ++k) {
        for (SpMat::InnerIterator it(m.data, k); it; ++it) {
            std::fprintf(f, "%lld %lld", static_cast<long long>(it.row() + 1),
                         static_cast<long long>(it.col() + 1));
            write_value(f, it.value(), field);
            std::fputc('\n', f);
        }
    }
    if (std::fclose(f) != 0) throw IoError("error closing '" + path + "'");
}

Mat read_matrix_market_dense(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty file", 1);
    Header h = parse_header(line);
    if (h.coordinate) {
        // Coordinate files go through the sparse reader.
        return read_matrix_market(path).to_dense();
    }
    if (!reader.next(line)) throw ParseError("missing size line", reader.lineno());
    long rows = 0, cols = 0;
    {
        std::istringstream in(line);
        if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw ParseError("bad size line", reader.lineno());
    }
    if (h.symmetry != Symmetry::General && rows != cols)
        throw ParseError("symmetric matrix must be square", reader.lineno());
    Mat out = Mat::Zero(rows, cols);
    for (long j = 0; j < cols; ++j) {
        long start = h.symmetry == Symmetry::General ? 0 : (h.skew ? j + 1 : j);
        for (long i = start; i < rows; ++i) {
            if (!reader.next(line)) throw ParseError("too few array entries", reader.lineno());
            std::istringstream in(line);
            cplx v = parse_value(in, h.field, reader.lineno());
            out(i, j) = v;
            if (i != j && h.symmetry != Symmetry::General)
                out(j, i) = h.skew ? -v : (h.symmetry == Symmetry::Hermitian ? std::conj(v) : v);
        }
    }
    if (reader.next(line)) throw ParseError("trailing data after the last entry", reader.lineno());
    require_finite(out, "read_matrix_market_dense");
    return out;
}

void write_matrix_market_dense(const std::string& path, const Mat& m, Field field) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot write '" + path + "'");
    if (field == Field::Pattern) field = Field::Real;
    std::fprintf(f, "%%%%MatrixMarket matrix array %s general\n", field_name(field));
    std::fprintf(f, "%lld %lld\n", static_cast<long long>(m.rows()), static_cast<long long>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            write_value(f, m(i, j), field);
            std::fputc('\n', f);
        }
    }
    if (std::fclose(f) != 0) throw IoError("error closing '" + path + "'");
}

SparseMatrix make_derivative_b(Eigen::Index n) {
    if (n < 1) throw InvalidArgument("make_derivative_b: n must be >= 1");
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        t.emplace_back(j, j, 1.0);
        t.emplace_back(j + 1, j, -1.0);
    }
    return SparseMatrix::from_triplets(n + 1, n, t);
}

SparsePencil SparsePencil::svd(SparseMatrix a) {
    SparsePencil p;
    p.mode_ = Mode::Svd;
    p.a_ = std::move(a);
    p.finalize();
    return p;
}

SparsePencil SparsePencil::gsvd(SparseMatrix a, SparseMatrix b) {
    if (a.cols() != b.cols())
        throw DimensionMismatch("pencil: A has " + std::to_string(a.cols()) + " columns, B has " +
                                std::to_string(b.cols()));
    SparsePencil p;
    p.mode_ = Mode::Gsvd;
    p.a_ = std::move(a);
    p.b_ = std::move(b);
    p.finalize();
    return p;
}

const SparseMatrix& SparsePencil::b() const {
    if (!b_) throw InvalidArgument("SVD-mode pencil has no explicit B");
    return *b_;
}

void SparsePencil::finalize() {
    const Eigen::Index n = a_.cols();
    if (a_.rows() < 1 || n < 1) throw DimensionMismatch("pencil: A must be nonempty");
    if (mode_ == Mode::Svd) {
        btb_.resize(n, n);
        btb_.setIdentity();
        norm_b_ = 1.0;
        real_ = a_.is_real();
    } else {
        btb_ = SpMat(b_->data.adjoint() * b_->data);
        btb_.makeCompressed();
        const SpMat& bd = b_->data;
        norm_b_ = two_norm_estimate([&](const Vec& x) -> Vec { return bd * x; },
                                    [&](const Vec& y) -> Vec { return bd.adjoint() * y; }, n);
        real_ = a_.is_real() && b_->is_real();
    }
    const SpMat& ad = a_.data;
    norm_a_ = two_norm_estimate([&](const Vec& x) -> Vec { return ad * x; },
                                [&](const Vec& y) -> Vec { return ad.adjoint() * y; }, n);
}

Mat SparsePencil::apply_b(const Mat& w) const {
    if (mode_ == Mode::Svd) return w;
    return b_->data * w;
}

Mat SparsePencil::apply_btb(const Mat& w) const {
    if (mode_ == Mode::Svd) return w;
    return b_->data.adjoint() * (b_->data * w);
}

SpMat assemble_shifted(const SparsePencil& pencil, cplx xi) {
    const Eigen::Index m = pencil.m(), n = pencil.n();
    const SpMat& a = pencil.a().data;
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(m + 2 * a.nonZeros() + pencil.btb().nonZeros());
    for (Eigen::Index i = 0; i < m; ++i) t.emplace_back(i, i, xi);
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SpMat::InnerIterator it(a, k); it; ++it) {
            t.emplace_back(it.row(), m + it.col(), -it.value());
            t.emplace_back(m + it.col(), it.row(), -std::conj(it.value()));
        }
    }
    const SpMat& btb = pencil.btb();
    for (int k = 0; k < btb.outerSize(); ++k)
        for (SpMat::InnerIterator it(btb, k); it; ++it)
            t.emplace_back(m + it.row(), m + it.col(), xi * it.value());
    SpMat out(m + n, m + n);
    out.setFromTriplets(t.begin(), t.end());
    out.makeCompressed();
    return out;
}

Mat apply_b_check(const SparsePencil& pencil, const Mat& z) {
    const Eigen::Index m = pencil.m(), n = pencil.n();
    if (z.rows() != m + n)
        throw DimensionMismatch("apply_b_check: expected " + std::to_string(m + n) + " rows, got " +
                                std::to_string(z.rows()));
    if (pencil.mode() == Mode::Svd) return z;
    Mat out(z.rows(), z.cols());
    out.topRows(m) = z.topRows(m);
    out.bottomRows(n) = pencil.apply_btb(z.bottomRows(n));
    return out;
}

}  // namespace feast
