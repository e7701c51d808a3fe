#include "protmeas/rationals.hpp"

#include <stdexcept>
#include <utility>

namespace protmeas {

namespace {

// n^e as an exact integer
mpz_class ipow(long n, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(e));
    return r;
}

}  // namespace

SeriesCoefficients::SeriesCoefficients(std::vector<mpq_class> exact) : exact_(std::move(exact)) {
    values_.reserve(exact_.size());
    for (const auto& q : exact_) values_.push_back(q.get_d());
}

SeriesCoefficients SeriesCoefficients::none() { return SeriesCoefficients{}; }

SeriesCoefficients SeriesCoefficients::solve(int order) {
    if (order < 1) throw std::invalid_argument("SeriesCoefficients::solve: order must be >= 1");
    const int N = order;

    // Augmented system rows: k = 0 gives sum a_n = 1, k = 1..N-1 give
    // sum a_n n^{2k} = 0. Gaussian elimination over mpq is exact; the first
    // nonzero pivot suffices (the system is always nonsingular).
    std::vector<std::vector<mpq_class>> m(N, std::vector<mpq_class>(N + 1));
    for (int k = 0; k < N; ++k) {
        for (int n = 1; n <= N; ++n) m[k][n - 1] = mpq_class(ipow(n, 2L * k));
        m[k][N] = (k == 0) ? 1 : 0;
    }

    for (int col = 0; col < N; ++col) {
        int piv = col;
        while (piv < N && m[piv][col] == 0) ++piv;
        if (piv == N) throw std::logic_error("SeriesCoefficients::solve: singular system");
        std::swap(m[col], m[piv]);
        const mpq_class lead = m[col][col];
        for (int j = col; j <= N; ++j) m[col][j] /= lead;
        for (int r = 0; r < N; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const mpq_class f = m[r][col];
            for (int j = col; j <= N; ++j) m[r][j] -= f * m[col][j];
        }
    }

    std::vector<mpq_class> a(N);
    for (int n = 0; n < N; ++n) {
        a[n] = m[n][N];
        a[n].canonicalize();
    }
    return SeriesCoefficients(std::move(a));
}

mpq_class SeriesCoefficients::moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment: k must be >= 0");
    mpq_class s = 0;
    for (int n = 1; n <= order(); ++n) s += exact_[n - 1] * mpq_class(ipow(n, 2L * k));
    s.canonicalize();
    return s;
}

double SeriesCoefficients::moment_d(int k) const { return moment(k).get_d(); }

std::vector<std::string> SeriesCoefficients::to_strings() const {
    std::vector<std::string> out;
    out.reserve(exact_.size());
    for (const auto& q : exact_) out.push_back(q.get_str());
    return out;
}

}  // namespace protmeas
