#include <doctest.h>

#include "dynrmat/builder.hpp"
#include "dynrmat/rmatrix.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dynrmat;

namespace {
bool near(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

DynamicalRMatrix constant_flip(int n, cplx c) {
    return DynamicalRMatrix(n, [n, c](const CVec&) {
        Coefficients k{CMatrix::Constant(n, n, c), CMatrix::Zero(n, n)};
        return k;
    });
}
}  // namespace

TEST_CASE("four-index example coefficients at (2,0,1,0)") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const CVec l{2.0, 0.0, 1.0, 0.0};
    CHECK(near(R.delta(1, 2, l), 0.5));
    CHECK(near(R.d(1, 2, l), 0.5));
    CHECK(near(R.delta(1, 3, l), 1.0 / 3.0));
    const DensePoint P = evaluate(R, l);
    CHECK(near(P.matrix(composite(4, 1, 2), composite(4, 2, 1)), 0.5));
    CHECK(near(P.matrix(composite(4, 1, 2), composite(4, 1, 2)), 0.5));
}

TEST_CASE("constant flip on a single D-class is c times the permutation") {
    const DynamicalRMatrix R = constant_flip(3, 2.5);
    for (const CVec& l : {CVec{0.1, 0.2, 0.3}, CVec{cplx(1, 1), -2.0, 4.0}}) {
        const DensePoint P = evaluate(R, l);
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b)
                for (int c = 1; c <= 3; ++c)
                    for (int d = 1; d <= 3; ++d) {
                        const cplx want = (c == b && d == a) ? cplx(2.5) : cplx(0.0);
                        CHECK(near(P.matrix(composite(3, a, b), composite(3, c, d)), want));
                    }
    }
}

TEST_CASE("pole on the four-index example matrix") {
    const DynamicalRMatrix R = build(testing::example4_params());
    try {
        (void)R.coefficients(CVec{1.0, 1.0, 0.3, 0.2});
        FAIL("expected a pole");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Pole);
    }
    CHECK_THROWS_AS((void)R.coefficients(CVec{1.0, 2.0}), Error);
}

TEST_CASE("embedding with shifts matches the direct triple-space construction") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const CVec l{cplx(0.3, 0.1), -1.2, cplx(0.7, -0.2), 2.4};
    struct Case { SlotPair sp; int s, t; std::optional<int> shift; };
    for (const Case& c : {Case{SlotPair::S12, 0, 1, 3}, Case{SlotPair::S13, 0, 2, 2}, Case{SlotPair::S23, 1, 2, 1},
                          Case{SlotPair::S12, 0, 1, std::nullopt}, Case{SlotPair::S13, 0, 2, std::nullopt}}) {
        const CMatrix mine = embed_with_shift(R, c.sp, c.shift, l);
        const Eigen::MatrixXcd ref = oracle::slot_operator(R, c.s, c.t, c.shift.has_value(), l);
        CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("embedding edge cases") {
    const DynamicalRMatrix one(1, [](const CVec& l) {
        return Coefficients{CMatrix::Constant(1, 1, 2.0 + l[0]), CMatrix::Zero(1, 1)};
    });
    const CMatrix m = embed_with_shift(one, SlotPair::S12, 3, CVec{0.5});
    CHECK(m.rows() == 1);
    CHECK(near(m(0, 0), 3.5));
    const DynamicalRMatrix flip = constant_flip(2, 1.5);
    const CVec l{0.2, -0.4};
    CHECK((embed_with_shift(flip, SlotPair::S13, 2, l) - embed_with_shift(flip, SlotPair::S13, std::nullopt, l))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("permuted matrix") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const DensePoint P = evaluate(R, CVec{2.0, 0.0, 1.0, 0.0});
    const CMatrix Rc = permuted(P);
    const int a = composite(4, 1, 2), b = composite(4, 2, 1);
    // Restricted to V_12 with basis (e1 e2, e2 e1).
    CHECK(near(Rc(a, a), -0.5));
    CHECK(near(Rc(a, b), 1.5));
    CHECK(near(Rc(b, a), 0.5));
    CHECK(near(Rc(b, b), 0.5));

    CMatrix flip = CMatrix::Zero(16, 16);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) flip(composite(4, j, i), composite(4, i, j)) = 1.0;
    CHECK((flip * Rc - P.matrix).cwiseAbs().maxCoeff() < 1e-15);

    const DensePoint id{1, {0.0}, CMatrix::Identity(1, 1)};
    CHECK(near(permuted(id)(0, 0), 1.0));
}

TEST_CASE("sum and determinant fields") {
    const DynamicalRMatrix R = build(testing::example4_params());
    for (const CVec& l : {CVec{2.0, 0.0, 1.0, 0.0}, CVec{cplx(0.4, 0.3), -1.0, 0.2, cplx(0.0, 1.0)}}) {
        const auto f = sum_and_det_fields(R, l);
        CHECK(near(f.at({1, 2}).S, 0.0));
        CHECK(near(f.at({1, 2}).Sigma, 1.0));
        CHECK(near(f.at({3, 4}).S, -2.0));
        CHECK(near(f.at({3, 4}).Sigma, -1.0));
    }
    const cplx k(2.5, 0.3);
    const DynamicalRMatrix B = build(testing::basic_trig(3, k));
    const auto f = sum_and_det_fields(B, CVec{0.3, cplx(0.1, 0.2), -0.6});
    for (const auto& [pair, sd] : f) {
        CHECK(near(sd.S, k - 1.0, 1e-12));
        CHECK(near(sd.Sigma, k, 1e-12));
    }
}
