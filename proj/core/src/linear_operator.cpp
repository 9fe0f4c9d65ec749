#include "ratstep/linear_operator.hpp"

#include <mutex>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "ratstep/error.hpp"

namespace ratstep {

std::string_view to_string(OperatorStructure s) noexcept {
    switch (s) {
        case OperatorStructure::Dense: return "dense";
        case OperatorStructure::LowerBidiagonal: return "lower-bidiagonal";
        case OperatorStructure::Tridiagonal: return "tridiagonal";
        case OperatorStructure::FivePoint2D: return "five-point-2D";
    }
    return "unknown";
}

ShiftedSolveOperator::ShiftedSolveOperator(Eigen::Index dimension, OperatorStructure structure, double omega)
    : dimension_(dimension), structure_(structure), omega_(omega) {
    if (dimension <= 0) throw Error(ErrorCode::InvalidArgument, "operator dimension must be positive");
}

ShiftedSolveOperator::~ShiftedSolveOperator() = default;

RealVector ShiftedSolveOperator::apply(const RealVector& v) const {
    if (v.size() != dimension_) throw Error(ErrorCode::DimensionMismatch, "apply: vector size != operator dimension");
    RealVector out(dimension_);
    apply_real(v, out);
    return out;
}

ComplexVector ShiftedSolveOperator::apply(const ComplexVector& v) const {
    if (v.size() != dimension_) throw Error(ErrorCode::DimensionMismatch, "apply: vector size != operator dimension");
    ComplexVector out(dimension_);
    apply_complex(v, out);
    return out;
}

ComplexVector ShiftedSolveOperator::solve_shifted(Complex w, double tau, const ComplexVector& rhs) const {
    if (rhs.size() != dimension_) {
        throw Error(ErrorCode::DimensionMismatch, "solve_shifted: rhs size != operator dimension");
    }
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "solve_shifted: tau must be positive");
    const auto factorization = factorization_for(w, tau);
    ++solves_;
    return factorization->solve(rhs);
}

std::shared_ptr<const ShiftedSolveOperator::Factorization> ShiftedSolveOperator::factorization_for(Complex w,
                                                                                                   double tau) const {
    if (!caching_.load()) {
        ++factorizations_;
        return factorize(tau * w);
    }
    const Key key{w.real(), w.imag(), tau};
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::shared_ptr<const Factorization> fresh = factorize(tau * w);
    ++factorizations_;
    std::unique_lock lock(cache_mutex_);
    // Another thread may have inserted meanwhile; keep whichever landed first.
    auto [it, inserted] = cache_.emplace(key, std::move(fresh));
    return it->second;
}

Eigen::MatrixXd ShiftedSolveOperator::to_dense() const {
    Eigen::MatrixXd out(dimension_, dimension_);
    RealVector e = RealVector::Zero(dimension_);
    RealVector col(dimension_);
    for (Eigen::Index j = 0; j < dimension_; ++j) {
        e(j) = 1.0;
        apply_real(e, col);
        out.col(j) = col;
        e(j) = 0.0;
    }
    return out;
}

void ShiftedSolveOperator::clear_cache() {
    std::unique_lock lock(cache_mutex_);
    cache_.clear();
}

std::size_t ShiftedSolveOperator::cached_factorizations() const {
    std::shared_lock lock(cache_mutex_);
    return cache_.size();
}

void ShiftedSolveOperator::reset_counters() noexcept {
    solves_.store(0);
    factorizations_.store(0);
}

namespace {

class DenseOperator final : public ShiftedSolveOperator {
public:
    DenseOperator(Eigen::MatrixXd matrix, double omega)
        : ShiftedSolveOperator(matrix.rows(), OperatorStructure::Dense, omega), matrix_(std::move(matrix)) {
        if (matrix_.rows() != matrix_.cols()) throw Error(ErrorCode::DimensionMismatch, "dense operator must be square");
    }

protected:
    class LU final : public Factorization {
    public:
        explicit LU(const Eigen::MatrixXcd& m) : lu_(m) {}
        ComplexVector solve(const ComplexVector& rhs) const override { return lu_.solve(rhs); }

    private:
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    };

    void apply_real(const RealVector& v, RealVector& out) const override { out.noalias() = matrix_ * v; }
    void apply_complex(const ComplexVector& v, ComplexVector& out) const override {
        const RealVector re = matrix_ * v.real();
        const RealVector im = matrix_ * v.imag();
        out.real() = re;
        out.imag() = im;
    }
    std::unique_ptr<Factorization> factorize(Complex shift) const override {
        const Eigen::Index n = matrix_.rows();
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - shift * matrix_.cast<Complex>();
        auto lu = std::make_unique<LU>(m);
        return lu;
    }

private:
    Eigen::MatrixXd matrix_;
};

class LowerBidiagonalOperator final : public ShiftedSolveOperator {
public:
    LowerBidiagonalOperator(RealVector diag, RealVector sub, double omega)
        : ShiftedSolveOperator(diag.size(), OperatorStructure::LowerBidiagonal, omega),
          diag_(std::move(diag)),
          sub_(std::move(sub)) {
        if (sub_.size() != diag_.size() - 1) throw Error(ErrorCode::DimensionMismatch, "sub-diagonal length != n-1");
    }

protected:
    class Forward final : public Factorization {
    public:
        Forward(ComplexVector diag, ComplexVector sub) : diag_(std::move(diag)), sub_(std::move(sub)) {}
        ComplexVector solve(const ComplexVector& rhs) const override {
            ComplexVector x(rhs.size());
            x(0) = rhs(0) / diag_(0);
            for (Eigen::Index i = 1; i < rhs.size(); ++i) x(i) = (rhs(i) - sub_(i - 1) * x(i - 1)) / diag_(i);
            return x;
        }

    private:
        ComplexVector diag_;
        ComplexVector sub_;
    };

    template <class V>
    void apply_any(const V& v, V& out) const {
        out(0) = diag_(0) * v(0);
        for (Eigen::Index i = 1; i < v.size(); ++i) out(i) = diag_(i) * v(i) + sub_(i - 1) * v(i - 1);
    }
    void apply_real(const RealVector& v, RealVector& out) const override { apply_any(v, out); }
    void apply_complex(const ComplexVector& v, ComplexVector& out) const override { apply_any(v, out); }

    std::unique_ptr<Factorization> factorize(Complex shift) const override {
        ComplexVector d = ComplexVector::Ones(diag_.size()) - shift * diag_.cast<Complex>();
        ComplexVector l = -shift * sub_.cast<Complex>();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (d(i) == Complex{0.0}) throw Error(ErrorCode::SingularShift, "zero pivot in bidiagonal shift");
        }
        return std::make_unique<Forward>(std::move(d), std::move(l));
    }

private:
    RealVector diag_;
    RealVector sub_;
};

class TridiagonalOperator final : public ShiftedSolveOperator {
public:
    TridiagonalOperator(RealVector sub, RealVector diag, RealVector super, double omega)
        : ShiftedSolveOperator(diag.size(), OperatorStructure::Tridiagonal, omega),
          sub_(std::move(sub)),
          diag_(std::move(diag)),
          super_(std::move(super)) {
        if (sub_.size() != diag_.size() - 1 || super_.size() != diag_.size() - 1) {
            throw Error(ErrorCode::DimensionMismatch, "off-diagonal length != n-1");
        }
    }

protected:
    // Thomas elimination without pivoting; I - tau w A is strictly diagonally
    // dominant for Re(w) > 0 and the dissipative stencils used here.
    class Thomas final : public Factorization {
    public:
        Thomas(ComplexVector sub, ComplexVector pivots, ComplexVector upper)
            : sub_(std::move(sub)), pivots_(std::move(pivots)), upper_(std::move(upper)) {}
        ComplexVector solve(const ComplexVector& rhs) const override {
            const Eigen::Index n = rhs.size();
            ComplexVector y(n);
            y(0) = rhs(0) / pivots_(0);
            for (Eigen::Index i = 1; i < n; ++i) y(i) = (rhs(i) - sub_(i - 1) * y(i - 1)) / pivots_(i);
            for (Eigen::Index i = n - 1; i-- > 0;) y(i) -= upper_(i) * y(i + 1);
            return y;
        }

    private:
        ComplexVector sub_;
        ComplexVector pivots_;
        ComplexVector upper_;  // normalized super-diagonal c'_i
    };

    template <class V>
    void apply_any(const V& v, V& out) const {
        const Eigen::Index n = v.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            auto acc = diag_(i) * v(i);
            if (i > 0) acc += sub_(i - 1) * v(i - 1);
            if (i + 1 < n) acc += super_(i) * v(i + 1);
            out(i) = acc;
        }
    }
    void apply_real(const RealVector& v, RealVector& out) const override { apply_any(v, out); }
    void apply_complex(const ComplexVector& v, ComplexVector& out) const override { apply_any(v, out); }

    std::unique_ptr<Factorization> factorize(Complex shift) const override {
        const Eigen::Index n = diag_.size();
        ComplexVector l = -shift * sub_.cast<Complex>();
        ComplexVector u = -shift * super_.cast<Complex>();
        ComplexVector pivots(n);
        ComplexVector upper(std::max<Eigen::Index>(n - 1, 0));
        pivots(0) = 1.0 - shift * diag_(0);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i > 0) pivots(i) = 1.0 - shift * diag_(i) - l(i - 1) * upper(i - 1);
            if (pivots(i) == Complex{0.0}) throw Error(ErrorCode::SingularShift, "zero pivot in tridiagonal shift");
            if (i + 1 < n) upper(i) = u(i) / pivots(i);
        }
        return std::make_unique<Thomas>(std::move(l), std::move(pivots), std::move(upper));
    }

private:
    RealVector sub_;
    RealVector diag_;
    RealVector super_;
};

class FivePointOperator final : public ShiftedSolveOperator {
public:
    explicit FivePointOperator(int M)
        : ShiftedSolveOperator(static_cast<Eigen::Index>(M - 1) * (M - 1), OperatorStructure::FivePoint2D, 0.0) {
        const int n = M - 1;
        const double inv_h2 = static_cast<double>(M) * M;
        std::vector<Eigen::Triplet<double>> entries;
        entries.reserve(static_cast<std::size_t>(5 * n * n));
        auto index = [n](int i, int j) { return static_cast<Eigen::Index>(j) * n + i; };
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const auto k = index(i, j);
                entries.emplace_back(k, k, -4.0 * inv_h2);
                if (i > 0) entries.emplace_back(k, index(i - 1, j), inv_h2);
                if (i + 1 < n) entries.emplace_back(k, index(i + 1, j), inv_h2);
                if (j > 0) entries.emplace_back(k, index(i, j - 1), inv_h2);
                if (j + 1 < n) entries.emplace_back(k, index(i, j + 1), inv_h2);
            }
        }
        matrix_.resize(dimension(), dimension());
        matrix_.setFromTriplets(entries.begin(), entries.end());
        matrix_.makeCompressed();
    }

protected:
    class SparseLU final : public Factorization {
    public:
        explicit SparseLU(const Eigen::SparseMatrix<Complex>& m) {
            lu_.analyzePattern(m);
            lu_.factorize(m);
            if (lu_.info() != Eigen::Success) throw Error(ErrorCode::SingularShift, "sparse LU factorization failed");
        }
        ComplexVector solve(const ComplexVector& rhs) const override { return lu_.solve(rhs); }

    private:
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu_;
    };

    void apply_real(const RealVector& v, RealVector& out) const override { out.noalias() = matrix_ * v; }
    void apply_complex(const ComplexVector& v, ComplexVector& out) const override {
        const RealVector re = matrix_ * v.real();
        const RealVector im = matrix_ * v.imag();
        out.real() = re;
        out.imag() = im;
    }
    std::unique_ptr<Factorization> factorize(Complex shift) const override {
        Eigen::SparseMatrix<Complex> identity(dimension(), dimension());
        identity.setIdentity();
        Eigen::SparseMatrix<Complex> shifted = identity - shift * matrix_.cast<Complex>();
        shifted.makeCompressed();
        return std::make_unique<SparseLU>(shifted);
    }

private:
    Eigen::SparseMatrix<double> matrix_;
};

}  // namespace

OperatorPtr make_dense(Eigen::MatrixXd matrix, double omega) {
    return std::make_shared<DenseOperator>(std::move(matrix), omega);
}

OperatorPtr make_lower_bidiagonal(RealVector diag, RealVector sub, double omega) {
    return std::make_shared<LowerBidiagonalOperator>(std::move(diag), std::move(sub), omega);
}

OperatorPtr make_tridiagonal(RealVector sub, RealVector diag, RealVector super, double omega) {
    return std::make_shared<TridiagonalOperator>(std::move(sub), std::move(diag), std::move(super), omega);
}

OperatorPtr make_upwind_1d(int M) {
    if (M < 2) throw Error(ErrorCode::InvalidArgument, "upwind grid needs M >= 2");
    const double inv_h = static_cast<double>(M);
    return make_lower_bidiagonal(RealVector::Constant(M, -inv_h), RealVector::Constant(M - 1, inv_h));
}

OperatorPtr make_heat_1d(int M) {
    if (M < 2) throw Error(ErrorCode::InvalidArgument, "heat grid needs M >= 2");
    const double inv_h2 = static_cast<double>(M) * M;
    const Eigen::Index n = M - 1;
    return make_tridiagonal(RealVector::Constant(n - 1, inv_h2), RealVector::Constant(n, -2.0 * inv_h2),
                            RealVector::Constant(n - 1, inv_h2));
}

OperatorPtr make_heat_2d(int M) {
    if (M < 2) throw Error(ErrorCode::InvalidArgument, "heat grid needs M >= 2");
    return std::make_shared<FivePointOperator>(M);
}

}  // namespace ratstep
