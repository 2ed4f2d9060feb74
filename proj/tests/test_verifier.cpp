#include <doctest.h>

#include "dynrmat/builder.hpp"
#include "dynrmat/verifier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dynrmat;

namespace {
DynamicalRMatrix with_edit(const DynamicalRMatrix& R, std::function<void(Coefficients&, const CVec&)> edit) {
    auto base = std::make_shared<DynamicalRMatrix>(R);
    return DynamicalRMatrix(R.n(), [base, edit](const CVec& l) {
        Coefficients c = base->coefficients(l);
        edit(c, l);
        return c;
    });
}
const CVec kExamplePoint{cplx(0.3, 0.1), -1.2, cplx(0.7, -0.2), 2.4};
}  // namespace

TEST_CASE("DQYBE residual on exact solutions") {
    const DynamicalRMatrix flip(3, [](const CVec&) {
        return Coefficients{CMatrix::Constant(3, 3, 1.7), CMatrix::Zero(3, 3)};
    });
    CHECK(dqybe_residual(flip, CVec{0.1, 0.2, 0.3}) < 1e-14);
    const DynamicalRMatrix R = build(testing::example4_params());
    CHECK(dqybe_residual(R, kExamplePoint) < 1e-12);
    CHECK(oracle::dqybe_dense(R, kExamplePoint) < 1e-12);
}

TEST_CASE("perturbed d_12 breaks the DQYBE") {
    const DynamicalRMatrix R =
        with_edit(build(testing::example4_params()), [](Coefficients& c, const CVec&) { c.d(0, 1) += 0.1; });
    CHECK(dqybe_residual(R, kExamplePoint) > 1e-3);
    CHECK(oracle::dqybe_dense(R, kExamplePoint) > 1e-3);
    CHECK(dqybe_defect(R, kExamplePoint).relative() == doctest::Approx(oracle::dqybe_dense(R, kExamplePoint)).epsilon(1e-6));
}

TEST_CASE("sparse and dense DQYBE agree on random data") {
    testing::Generator gen(77);
    for (int t = 0; t < 15; ++t) {
        const ClassificationParams c = gen.datum({});
        const DynamicalRMatrix R = with_edit(build(c), [](Coefficients& k, const CVec& l) {
            k.delta(0, 0) += 0.05 * l[0];
        });
        for (const CVec& l : draw_samples(R, 1, t + 1))
            CHECK(dqybe_defect(R, l).relative() == doctest::Approx(oracle::dqybe_dense(R, l)).epsilon(1e-6));
    }
}

TEST_CASE("component equations on the four-index example") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const ResidualReport rep = check_system(R, draw_samples(R, 4, 3));
    CHECK(rep.pass);
    CHECK(rep.per_equation.size() == kEquationTags.size());
    for (const auto& [tag, v] : rep.per_equation) CHECK(v < 1e-10);
}

TEST_CASE("non-constant diagonal is flagged on G0") {
    const DynamicalRMatrix R =
        with_edit(build(testing::example4_params()), [](Coefficients& c, const CVec& l) { c.delta(0, 0) = l[0]; });
    const ResidualReport rep = check_system(R, draw_samples(R, 3, 5));
    CHECK_FALSE(rep.pass);
    CHECK(rep.per_equation.at("G0") > 1e-3);
    bool flagged = false;
    for (const ResidualRow& row : rep.rows)
        if (row.equation == "G0" && row.i == 1 && row.residual > 1e-3) flagged = true;
    CHECK(flagged);
}

TEST_CASE("n = 2 leaves triple equations vacuous") {
    const DynamicalRMatrix R = build(testing::trig_free(2, 1.0, 2.0));
    const ResidualReport rep = check_system(R, draw_samples(R, 2, 9));
    for (const char* tag : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
        REQUIRE(rep.per_equation.count(tag) == 1);
        CHECK(rep.per_equation.at(tag) == 0.0);
    }
}

TEST_CASE("zero-weight pattern") {
    const DynamicalRMatrix R = build(testing::example4_params());
    CHECK(check_zero_weight(evaluate(R, kExamplePoint), 1e-14));
    DensePoint rnd{2, {0.0, 0.0}, CMatrix::Random(4, 4)};
    CHECK_FALSE(check_zero_weight(rnd, 1e-14));
}

TEST_CASE("determinant identity") {
    const DynamicalRMatrix flip(2, [](const CVec&) {
        return Coefficients{CMatrix::Constant(2, 2, 2.0), CMatrix::Zero(2, 2)};
    });
    const InvertibilityCheck a = check_invertibility(flip, CVec{0.0, 0.0});
    CHECK(std::abs(a.det_factorized + 16.0) < 1e-12);
    CHECK(a.agree);
    CHECK(a.invertible);

    const DynamicalRMatrix R = build(testing::example4_params());
    const CVec l{2.0, 0.0, 1.0, 0.0};
    const InvertibilityCheck b = check_invertibility(R, l);
    CHECK(b.agree);
    CHECK(b.invertible);
    CHECK(std::abs(b.det_dense - oracle::gauss_det(oracle::dense_rows(R.coefficients(l)))) < 1e-10);

    // d_12 d_21 = Delta_12 Delta_21 makes Sigma_12 vanish.
    const DynamicalRMatrix S = with_edit(R, [](Coefficients& c, const CVec&) {
        c.d(0, 1) = c.delta(0, 1) * c.delta(1, 0) / c.d(1, 0);
    });
    const InvertibilityCheck s = check_invertibility(S, l);
    CHECK(std::abs(s.det_factorized) < 1e-14);
    CHECK(s.agree);
    CHECK_FALSE(s.invertible);
}

TEST_CASE("shift identities") {
    const DynamicalRMatrix R = build(testing::example4_params());
    CHECK(shift_identities(R, kExamplePoint).max_residual < 1e-12);
    const DynamicalRMatrix T = build(testing::trig_free(2, 1.0, 2.0));
    CHECK(shift_identities(T, CVec{0.3, cplx(0.2, 0.1)}).max_residual < 1e-12);
    // beta(l + e_1) / beta(l) = e^A for the pair (1,2): Delta_21/Delta_12 scales by 1/2.
    const CVec l{0.3, cplx(0.2, 0.1)};
    const cplx r0 = T.delta(2, 1, l) / T.delta(1, 2, l), r1 = T.delta(2, 1, shifted(l, 1)) / T.delta(1, 2, shifted(l, 1));
    CHECK(std::abs(r1 / r0 - 0.5) < 1e-12);
    const DynamicalRMatrix one = build(testing::single_dclass(2, 1.5));
    CHECK(shift_identities(one, CVec{0.1, 0.2}).rows.empty());
}

TEST_CASE("seeded sampling is reproducible") {
    const DynamicalRMatrix R = build(testing::example4_params());
    CHECK(draw_samples(R, 4, 42) == draw_samples(R, 4, 42));
    CHECK(draw_samples(R, 4, 42) != draw_samples(R, 4, 43));
}

TEST_CASE("verify names the violated equation") {
    const DynamicalRMatrix R =
        with_edit(build(testing::example4_params()), [](Coefficients& c, const CVec&) { c.d(0, 2) += 0.01; });
    const VerifyReport rep = verify(R, draw_samples(R, 4, 1));
    CHECK_FALSE(rep.pass);
    CHECK(rep.summary.find("violated equation") != std::string::npos);
}
