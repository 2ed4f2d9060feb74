// rmatrix.cpp

#include "dynrmat/rmatrix.hpp"

#include <array>
#include <cmath>

namespace dynrmat {

Coefficients DynamicalRMatrix::coefficients(const CVec& lambda) const {
    if (static_cast<int>(lambda.size()) != n_)
        throw Error(ErrorKind::InvalidInput, "lambda has length " + std::to_string(lambda.size()) +
                                                 ", expected " + std::to_string(n_));
    Coefficients c = field_(lambda);
    if (!tl_lenient_poles && (!c.delta.allFinite() || !c.d.allFinite()))
        throw Error(ErrorKind::Pole, "non-finite coefficient at lambda");
    return c;
}

Coefficients DynamicalRMatrix::partial_coefficients(const CVec& lambda) const {
    if (static_cast<int>(lambda.size()) != n_)
        throw Error(ErrorKind::InvalidInput, "lambda has length " + std::to_string(lambda.size()) +
                                                 ", expected " + std::to_string(n_));
    const bool saved = tl_lenient_poles;
    tl_lenient_poles = true;
    try {
        Coefficients c = field_(lambda);
        tl_lenient_poles = saved;
        return c;
    } catch (...) {
        tl_lenient_poles = saved;
        throw;
    }
}

CMatrix dense_from(const Coefficients& c) {
    const int n = static_cast<int>(c.delta.rows());
    CMatrix M = CMatrix::Zero(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            M(composite(n, i, j), composite(n, j, i)) += c.delta(i - 1, j - 1);
            if (i != j) M(composite(n, i, j), composite(n, i, j)) += c.d(i - 1, j - 1);
        }
    return M;
}

DensePoint evaluate(const DynamicalRMatrix& R, const CVec& lambda) {
    return {R.n(), lambda, dense_from(R.coefficients(lambda))};
}

CMatrix embed_with_shift(const DynamicalRMatrix& R, SlotPair slots, std::optional<int> shift_slot,
                         const CVec& lambda) {
    const int n = R.n();
    const int N = n * n * n;
    std::array<int, 2> sl{};
    switch (slots) {
        case SlotPair::S12: sl = {0, 1}; break;
        case SlotPair::S13: sl = {0, 2}; break;
        case SlotPair::S23: sl = {1, 2}; break;
    }
    if (shift_slot && (*shift_slot < 1 || *shift_slot > 3 || *shift_slot - 1 == sl[0] || *shift_slot - 1 == sl[1]))
        throw Error(ErrorKind::InvalidInput, "shift slot must be the spectator slot");

    std::vector<CMatrix> dense;
    if (shift_slot) {
        for (int c = 1; c <= n; ++c) dense.push_back(evaluate(R, shifted(lambda, c)).matrix);
    } else {
        dense.push_back(evaluate(R, lambda).matrix);
    }
    CMatrix E = CMatrix::Zero(N, N);
    std::array<int, 3> v{};
    for (v[0] = 1; v[0] <= n; ++v[0])
        for (v[1] = 1; v[1] <= n; ++v[1])
            for (v[2] = 1; v[2] <= n; ++v[2]) {
                const CMatrix& M = shift_slot ? dense[v[*shift_slot - 1] - 1] : dense[0];
                const int col2 = composite(n, v[sl[0]], v[sl[1]]);
                const int col3 = ((v[0] - 1) * n + (v[1] - 1)) * n + (v[2] - 1);
                for (int a = 1; a <= n; ++a)
                    for (int b = 1; b <= n; ++b) {
                        const cplx m = M(composite(n, a, b), col2);
                        if (m == cplx(0.0)) continue;
                        std::array<int, 3> w = v;
                        w[sl[0]] = a;
                        w[sl[1]] = b;
                        E(((w[0] - 1) * n + (w[1] - 1)) * n + (w[2] - 1), col3) += m;
                    }
            }
    return E;
}

CMatrix permuted(const DensePoint& P) {
    const int n = P.n;
    CMatrix out(n * n, n * n);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) out.row(composite(n, b, a)) = P.matrix.row(composite(n, a, b));
    return out;
}

std::map<std::pair<int, int>, SumDet> sum_and_det_fields(const DynamicalRMatrix& R, const CVec& lambda) {
    const Coefficients c = R.coefficients(lambda);
    std::map<std::pair<int, int>, SumDet> out;
    for (int i = 0; i < R.n(); ++i)
        for (int j = i + 1; j < R.n(); ++j)
            out[{i + 1, j + 1}] = {c.delta(i, j) + c.delta(j, i),
                                   c.d(i, j) * c.d(j, i) - c.delta(i, j) * c.delta(j, i)};
    return out;
}

}  // namespace dynrmat
