#include <doctest.h>

#include "dynrmat/builder.hpp"
#include "dynrmat/verifier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dynrmat;

namespace {
bool near(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("four-index example build matches the hand-written matrix") {
    const DynamicalRMatrix R = build(testing::example4_partition(), testing::example4_params());
    for (const CVec& l : draw_samples(R, 5, 11)) {
        const CMatrix diff = evaluate(R, l).matrix - oracle::example4_matrix(l);
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
    }
    const CVec l{2.0, 0.0, 1.0, 0.0};
    CHECK(near(R.delta(1, 1, l), 1.0));
    CHECK(near(R.delta(3, 4, l), -1.0));
    CHECK(near(R.delta(4, 3, l), -1.0));
    CHECK(near(R.d(3, 4, l), 0.0));
}

TEST_CASE("partition mismatch is rejected") {
    CHECK_THROWS_AS(build(IndexPartition{4, {{{{1, 2, 3, 4}, {}}}}}, testing::example4_params()), Error);
}

TEST_CASE("single D-class gives c times the flip") {
    const DynamicalRMatrix R = build(testing::single_dclass(3, -2.0));
    const Coefficients c = R.coefficients(CVec{0.1, 0.2, 0.3});
    CHECK((c.delta - CMatrix::Constant(3, 3, -2.0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.d.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two free trigonometric indices at (1,0)") {
    const DynamicalRMatrix R = build(testing::trig_free(2, 1.0, 2.0));
    const Coefficients c = R.coefficients(CVec{1.0, 0.0});
    CHECK(near(c.delta(0, 0), 2.0));
    CHECK(near(c.delta(1, 1), 2.0));
    CHECK(near(c.delta(0, 1), 2.0));
    CHECK(near(c.delta(1, 0), -1.0));
    CHECK(near(c.d(0, 1), 0.0, 1e-12));
    CHECK(near(c.d(1, 0), 3.0));
    for (const CVec& l : {CVec{0.3, 0.7}, CVec{cplx(0.2, 1.0), -0.4}}) {
        const Coefficients k = R.coefficients(l);
        CHECK(near(k.d(0, 1) * k.d(1, 0) - k.delta(0, 1) * k.delta(1, 0), 2.0, 1e-11));
    }
}

TEST_CASE("lower cross-class Delta vanishes, upper equals S") {
    ClassificationParams c;
    c.partition = {3, {{{{1, 2}, {}}, {{3}, {}}}}};
    c.per_block = {{cplx(1.5, 0.2), cplx(0.7, -0.1)}};
    const Coefficients k = build(c).coefficients(CVec{0.3, -0.2, 0.5});
    CHECK(near(k.delta(0, 2), c.per_block[0].S));
    CHECK(near(k.delta(2, 0), 0.0));
    CHECK(near(k.delta(2, 1), 0.0));
    CHECK(near(k.d(0, 2) * k.d(2, 0), c.per_block[0].Sigma));
}

TEST_CASE("commuting operators") {
    const CommutingOps ops = build_commuting_ops(testing::example4_partition(), testing::example4_params());
    CHECK(near(ops.R0(composite(4, 1, 1), composite(4, 1, 1)), 1.0));
    CHECK(near(ops.R0(composite(4, 2, 2), composite(4, 2, 2)), 1.0));
    CHECK(ops.R0.cwiseAbs().sum() == doctest::Approx(2.0));
    REQUIRE(ops.family.count("3,4") == 1);
    const CMatrix& M = ops.family.at("3,4");
    for (int j : {3, 4})
        for (int jp : {3, 4}) CHECK(near(M(composite(4, j, jp), composite(4, jp, j)), -0.5));
    CHECK(M.cwiseAbs().sum() == doctest::Approx(2.0));

    const ClassificationParams free = testing::trig_free(3, 1.0, 2.0);
    CHECK(build_commuting_ops(free.partition, free).family.empty());

    const ClassificationParams one = testing::single_dclass(2, 3.0);
    const CommutingOps o = build_commuting_ops(one.partition, one);
    CHECK(o.R0.cwiseAbs().maxCoeff() == 0.0);
    CHECK(near(o.family.at("1,2")(composite(2, 1, 2), composite(2, 2, 1)), 1.5));
}

TEST_CASE("random builds solve the DQYBE by the dense triple-space oracle") {
    testing::Generator gen(2024);
    for (int t = 0; t < 25; ++t) {
        const ClassificationParams c = gen.datum({});
        const DynamicalRMatrix R = build(c);
        for (const CVec& l : draw_samples(R, 2, 100 + t)) CHECK(oracle::dqybe_dense(R, l) < 1e-9);
    }
}

TEST_CASE("pair descriptors") {
    const ClassificationParams c = testing::example4_params();
    CHECK(pair_descriptor(c, 3, 4).find("Delta_I") != std::string::npos);
    CHECK(pair_descriptor(c, 1, 2).find("sqrt(Sigma_q)") != std::string::npos);
}
